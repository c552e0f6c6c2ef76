"""Detector building blocks: adaptive fusion, coordinate attention, C3CA, SPPF.

All blocks are BatchNorm-free and use SiLU activations, so they behave
identically in train/eval mode, work at batch size 1, and stay smooth in
their parameters (finite-difference gradient checks hold at float64).
"""

from __future__ import annotations

import torch
import torch.nn.functional as F
from torch import nn

from .errors import ShapeMismatch


def _expect_feature_map(x: torch.Tensor, name: str = "x") -> None:
    if x.dim() != 4 or min(x.shape) < 1:
        raise ShapeMismatch(f"{name} must be 4-D (B,C,H,W) with all dims >= 1, got {tuple(x.shape)}")
    if not torch.isfinite(x).all():
        raise ValueError(f"{name} contains non-finite values")


class ConvAct(nn.Module):
    """Conv + SiLU; padding keeps spatial dims."""

    def __init__(self, c_in: int, c_out: int, kernel: int = 1):
        super().__init__()
        self.conv = nn.Conv2d(c_in, c_out, kernel, padding=kernel // 2)
        self.act = nn.SiLU()

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.act(self.conv(x))


class AdaptiveFusion(nn.Module):
    """Fuse a coarse map with a 2x finer one using per-pixel learned weights.

    The coarse map is upsampled to the fine resolution; a 1x1 projection
    over the concatenated pair yields two logits per pixel, normalized by
    softmax so the fusion is a convex combination at every location.
    """

    def __init__(self, channels: int):
        super().__init__()
        if channels < 1:
            raise ShapeMismatch(f"channels must be >= 1, got {channels}")
        self.channels = channels
        self.weight_head = nn.Conv2d(2 * channels, 2, kernel_size=1)

    def _check(self, coarse: torch.Tensor, fine: torch.Tensor) -> None:
        _expect_feature_map(coarse, "coarse")
        _expect_feature_map(fine, "fine")
        if coarse.shape[1] != self.channels or fine.shape[1] != self.channels:
            raise ShapeMismatch(
                f"expected {self.channels} channels, got {coarse.shape[1]} and {fine.shape[1]}"
            )
        if coarse.shape[0] != fine.shape[0]:
            raise ShapeMismatch("batch sizes differ")
        if fine.shape[2] != 2 * coarse.shape[2] or fine.shape[3] != 2 * coarse.shape[3]:
            raise ShapeMismatch(
                f"fine spatial dims {tuple(fine.shape[2:])} are not 2x coarse {tuple(coarse.shape[2:])}"
            )

    def fusion_weights(self, coarse: torch.Tensor, fine: torch.Tensor) -> torch.Tensor:
        """Per-pixel (B,2,2H,2W) weights; they sum to 1 at every pixel."""
        self._check(coarse, fine)
        up = F.interpolate(coarse, scale_factor=2, mode="nearest")
        return torch.softmax(self.weight_head(torch.cat([up, fine], dim=1)), dim=1)

    def forward(self, coarse: torch.Tensor, fine: torch.Tensor) -> torch.Tensor:
        self._check(coarse, fine)
        up = F.interpolate(coarse, scale_factor=2, mode="nearest")
        weights = torch.softmax(self.weight_head(torch.cat([up, fine], dim=1)), dim=1)
        return weights[:, 0:1] * up + weights[:, 1:2] * fine


class CoordinateAttention(nn.Module):
    """Directional attention: pool along H and W, re-weight every cell.

    Mean-pooled column and row descriptors pass through one shared
    bottleneck projection, are split back per direction, mapped to (0,1)
    by sigmoid, and broadcast-multiplied with the input.
    """

    def __init__(self, channels: int, reduction: int = 8):
        super().__init__()
        if channels < 1:
            raise ShapeMismatch(f"channels must be >= 1, got {channels}")
        mid = max(1, channels // reduction)
        self.channels = channels
        self.squeeze = nn.Conv2d(channels, mid, kernel_size=1)
        self.act = nn.SiLU()
        self.attn_h = nn.Conv2d(mid, channels, kernel_size=1)
        self.attn_w = nn.Conv2d(mid, channels, kernel_size=1)

    def attention(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """(a_h of shape (B,C,H,1), a_w of shape (B,C,1,W)), both in (0,1)."""
        _expect_feature_map(x)
        if x.shape[1] != self.channels:
            raise ShapeMismatch(f"expected {self.channels} channels, got {x.shape[1]}")
        h, w = x.shape[2], x.shape[3]
        pool_h = x.mean(dim=3, keepdim=True)                     # (B,C,H,1)
        pool_w = x.mean(dim=2, keepdim=True).transpose(2, 3)     # (B,C,W,1)
        y = self.act(self.squeeze(torch.cat([pool_h, pool_w], dim=2)))
        y_h, y_w = torch.split(y, [h, w], dim=2)
        a_h = torch.sigmoid(self.attn_h(y_h))
        a_w = torch.sigmoid(self.attn_w(y_w)).transpose(2, 3)
        return a_h, a_w

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        a_h, a_w = self.attention(x)
        return x * a_h * a_w


class Bottleneck(nn.Module):
    """1x1 reduce, 3x3 expand, optional additive shortcut."""

    def __init__(self, channels: int, shortcut: bool = True, expansion: float = 0.5):
        super().__init__()
        mid = max(1, int(channels * expansion))
        self.cv1 = ConvAct(channels, mid, 1)
        self.cv2 = ConvAct(mid, channels, 3)
        self.shortcut = shortcut

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        y = self.cv2(self.cv1(x))
        return x + y if self.shortcut else y


class C3CA(nn.Module):
    """C3 block with coordinate attention on its bottleneck branch.

    Two 1x1 reductions split the input; one side runs the bottleneck
    stack and is re-weighted by CA before the halves are concatenated
    and projected to the configured output channels.
    """

    def __init__(self, c_in: int, c_out: int, n: int = 1, reduction: int = 8):
        super().__init__()
        if c_in < 1 or c_out < 1:
            raise ShapeMismatch(f"channel config must be >= 1, got {c_in}->{c_out}")
        mid = max(1, c_out // 2)
        self.c_in = c_in
        self.cv1 = ConvAct(c_in, mid, 1)
        self.cv2 = ConvAct(c_in, mid, 1)
        self.m = nn.Sequential(*(Bottleneck(mid) for _ in range(n)))
        self.ca = CoordinateAttention(mid, reduction)
        self.cv3 = ConvAct(2 * mid, c_out, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        _expect_feature_map(x)
        if x.shape[1] != self.c_in:
            raise ShapeMismatch(f"expected {self.c_in} channels, got {x.shape[1]}")
        return self.cv3(torch.cat([self.ca(self.m(self.cv1(x))), self.cv2(x)], dim=1))


class SPPF(nn.Module):
    """Spatial pyramid pooling, fast variant.

    Three successive stride-1 kernel-5 padded max pools; the input and
    the three pooled maps are concatenated on channels and projected by
    a 1x1 conv. Spatial dims never change.
    """

    def __init__(self, c_in: int, c_out: int):
        super().__init__()
        if c_in < 1 or c_out < 1:
            raise ShapeMismatch(f"channel config must be >= 1, got {c_in}->{c_out}")
        self.c_in = c_in
        self.pool = nn.MaxPool2d(kernel_size=5, stride=1, padding=2)
        self.proj = ConvAct(4 * c_in, c_out, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        _expect_feature_map(x)
        if x.shape[1] != self.c_in:
            raise ShapeMismatch(f"expected {self.c_in} channels, got {x.shape[1]}")
        p1 = self.pool(x)
        p2 = self.pool(p1)
        p3 = self.pool(p2)
        return self.proj(torch.cat([x, p1, p2, p3], dim=1))

"""Deterministic detector stand-in: threshold + connected components.

Gives end-to-end tests a real detector-shaped executable without any
trained weights. Boxes are tight around each bright component; the
confidence is the component's mean intensity.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .bboxio import Detection


def _to_unit_gray(image: np.ndarray) -> np.ndarray:
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale array, got shape {image.shape}")
    arr = np.asarray(image)
    if not np.isfinite(arr).all():
        raise ValueError("image contains non-finite values")
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.float64) / 255.0
    return np.clip(arr.astype(np.float64), 0.0, 1.0)


def stub_detect(image: np.ndarray, threshold: float = 0.5) -> list[Detection]:
    """Boxes for connected bright regions, ordered by first pixel in row-major scan."""
    gray = _to_unit_gray(image)
    mask = gray > threshold
    labels, count = ndimage.label(mask)
    detections: list[Detection] = []
    order = []
    for idx in range(1, count + 1):
        ys, xs = np.nonzero(labels == idx)
        # exclusive maxima: a 10x10 square spans exactly 10 units per side
        box = Detection(
            x1=float(xs.min()),
            y1=float(ys.min()),
            x2=float(xs.max() + 1),
            y2=float(ys.max() + 1),
            confidence=float(gray[ys, xs].mean()),
        )
        first = int(ys.min()) * gray.shape[1] + int(xs[ys == ys.min()].min())
        order.append((first, box))
    order.sort(key=lambda item: item[0])
    detections = [box for _, box in order]
    return detections

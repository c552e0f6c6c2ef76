"""Vertebra detector blocks, stub inference, box file IO, and metrics."""

from .bboxio import Detection, emit_bbox_file, format_detections, load_bbox_file, parse_detections
from .blocks import SPPF, AdaptiveFusion, Bottleneck, C3CA, ConvAct, CoordinateAttention
from .errors import BoxFileError, EmptyTruth, ShapeMismatch
from .metrics import DEFAULT_THRESHOLDS, MetricsReport, ThresholdMetrics, evaluate, iou
from .stub import stub_detect

__all__ = [
    "AdaptiveFusion",
    "Bottleneck",
    "BoxFileError",
    "C3CA",
    "ConvAct",
    "CoordinateAttention",
    "DEFAULT_THRESHOLDS",
    "Detection",
    "EmptyTruth",
    "MetricsReport",
    "SPPF",
    "ShapeMismatch",
    "ThresholdMetrics",
    "emit_bbox_file",
    "evaluate",
    "format_detections",
    "iou",
    "load_bbox_file",
    "parse_detections",
    "stub_detect",
]

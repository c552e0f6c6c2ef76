"""Detection quality metrics: IoU, precision/recall, AP, mAP over thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .bboxio import Detection
from .errors import EmptyTruth

DEFAULT_THRESHOLDS = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))


def iou(a: Detection, b: Detection) -> float:
    ix1 = max(a.x1, b.x1)
    iy1 = max(a.y1, b.y1)
    ix2 = min(a.x2, b.x2)
    iy2 = min(a.y2, b.y2)
    inter = max(0.0, ix2 - ix1) * max(0.0, iy2 - iy1)
    if inter == 0.0:
        return 0.0
    union = a.area() + b.area() - inter
    return inter / union


@dataclass(frozen=True)
class ThresholdMetrics:
    iou_threshold: float
    precision: float
    recall: float
    ap: float


@dataclass(frozen=True)
class MetricsReport:
    thresholds: tuple[ThresholdMetrics, ...]
    mean_ap: float

    def at(self, iou_threshold: float) -> ThresholdMetrics:
        for entry in self.thresholds:
            if abs(entry.iou_threshold - iou_threshold) < 1e-9:
                return entry
        raise KeyError(f"no metrics at IoU threshold {iou_threshold}")

    def to_dict(self) -> dict:
        return {
            "thresholds": [
                {
                    "iou_threshold": t.iou_threshold,
                    "precision": t.precision,
                    "recall": t.recall,
                    "ap": t.ap,
                }
                for t in self.thresholds
            ],
            "mean_ap": self.mean_ap,
        }


def _match_at_threshold(
    predictions: Mapping[str, Sequence[Detection]],
    truths: Mapping[str, Sequence[Detection]],
    threshold: float,
    total_truth: int,
) -> ThresholdMetrics:
    # Global confidence ranking; ties keep per-image submission order.
    ranked: list[tuple[float, str, Detection]] = []
    for image in sorted(predictions):
        for det in predictions[image]:
            ranked.append((det.confidence, image, det))
    ranked.sort(key=lambda item: -item[0])

    matched: dict[str, list[bool]] = {
        image: [False] * len(boxes) for image, boxes in truths.items()
    }
    tp = 0
    fp = 0
    # PR points recorded once per distinct confidence so tied detections
    # across images cannot reorder the curve.
    points: list[tuple[float, float]] = []
    for rank, (conf, image, det) in enumerate(ranked):
        truth_boxes = truths.get(image, ())
        flags = matched.get(image, [])
        best_iou = 0.0
        best_idx = -1
        for idx, truth in enumerate(truth_boxes):
            if flags[idx]:
                continue
            overlap = iou(det, truth)
            if overlap > best_iou:
                best_iou = overlap
                best_idx = idx
        if best_idx >= 0 and best_iou >= threshold:
            flags[best_idx] = True
            tp += 1
        else:
            fp += 1
        last_of_group = rank + 1 == len(ranked) or ranked[rank + 1][0] != conf
        if last_of_group:
            points.append((tp / total_truth, tp / (tp + fp)))

    ap = 0.0
    prev_recall = 0.0
    for i, (recall, _) in enumerate(points):
        envelope = max(p for _, p in points[i:])
        ap += (recall - prev_recall) * envelope
        prev_recall = recall

    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / total_truth
    return ThresholdMetrics(threshold, precision, recall, ap)


def evaluate(
    predictions: Mapping[str, Sequence[Detection]],
    truths: Mapping[str, Sequence[Detection]],
    iou_thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> MetricsReport:
    """Greedy confidence-ordered matching per image at each IoU threshold.

    Each truth box matches at most one detection. AP is the area under
    the precision envelope of the recall curve. Raises EmptyTruth when
    there are no ground-truth boxes anywhere.
    """
    total_truth = sum(len(boxes) for boxes in truths.values())
    if total_truth == 0:
        raise EmptyTruth("no ground truth boxes to evaluate against")
    entries = tuple(
        _match_at_threshold(predictions, truths, thr, total_truth)
        for thr in iou_thresholds
    )
    mean_ap = sum(e.ap for e in entries) / len(entries)
    return MetricsReport(thresholds=entries, mean_ap=mean_ap)

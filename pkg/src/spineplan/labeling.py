"""Vertebra label catalog and the per-view label map.

A label map binds (view, vertebra name) to one detection box.  A
vertebra is "paired" once both views carry its label; pairing is the
precondition for placing a screw.  The map enforces a bijection per
view: one box per label and one label per box.
"""

from __future__ import annotations

from typing import Mapping

from .bbox import BBox, hit_test
from .errors import DuplicateBox, NoMatchingBox, UnknownLabel
from .geometry import Point2, ViewKind

# Cervical, thoracic, lumbar, sacral; index order is the export order.
VERTEBRA_LABELS: tuple[str, ...] = (
    tuple(f"C{i}" for i in range(1, 8))
    + tuple(f"T{i}" for i in range(1, 13))
    + tuple(f"L{i}" for i in range(1, 6))
    + ("S1",)
)

_LABEL_INDEX = {name: i for i, name in enumerate(VERTEBRA_LABELS)}

LabelKey = tuple[ViewKind, str]
LabelMap = dict[LabelKey, BBox]


def validate_label(name: str) -> str:
    if name not in _LABEL_INDEX:
        raise UnknownLabel(f"{name!r} is not a vertebra label (C1-C7, T1-T12, L1-L5, S1)")
    return name


def label_order(name: str) -> int:
    """Catalog position, used for deterministic plan ordering."""
    return _LABEL_INDEX[name]


def label_vertebra(
    labels: Mapping[LabelKey, BBox],
    view: ViewKind,
    p: Point2,
    boxes: list[BBox],
    label: str,
) -> tuple[LabelMap, BBox]:
    """Bind a clicked box to a vertebra name in one view.

    Returns the updated map and the hit box; the caller shows its marker
    at the click point p.  Relabeling the same (view, label) replaces the
    entry.  Raises NoMatchingBox on a miss (the map is untouched) and
    DuplicateBox when the hit box already carries a different label in
    this view.
    """
    validate_label(label)
    box = hit_test(p, boxes)
    if box is None:
        raise NoMatchingBox("no comparable bounding box is found")
    for (other_view, other_label), bound in labels.items():
        if other_view is view and bound == box and other_label != label:
            raise DuplicateBox(
                f"box already labeled {other_label!r} in the {view.value} view"
            )
    updated: LabelMap = dict(labels)
    updated[(view, label)] = box
    return updated, box


def paired_boxes(
    labels: Mapping[LabelKey, BBox], label: str
) -> tuple[BBox, BBox] | None:
    """(AP box, LP box) once the label exists in both views, else None."""
    ap = labels.get((ViewKind.AP, label))
    lp = labels.get((ViewKind.LP, label))
    if ap is None or lp is None:
        return None
    return ap, lp

"""Planning session state and its lifecycle operations.

A session owns two calibrated views (AP and LP), the vertebra label map,
and the screw list.  All operations are functional: they take a Session
and return a new one, so callers can hand out consistent snapshots while
a single writer applies mutations.

The first screw placement captures the vertical misalignment between the
two views from its vertebra's box pair and folds it into the LP
calibration (sync_captured flag); later relabeling never silently
recalibrates.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .bbox import BBox
from .errors import (
    DuplicateScrew,
    EmptyPlan,
    InvalidImage,
    OutOfBounds,
    UnknownScrew,
    UnpairedLabel,
)
from .geometry import (
    Point2,
    Point3,
    Screw,
    ScrewEndpoint,
    Side,
    ViewCalibration,
    ViewKind,
    apply_drag,
    project,
    sync_offset_from_pair,
)
from .labeling import (
    LabelKey,
    LabelMap,
    label_order,
    label_vertebra,
    paired_boxes,
    validate_label,
)
from .plandoc import PlanDocument, PlanScrew

ROTATIONS = (0, 90, 180, 270)

# Default trajectory template as fractions of the paired boxes' widths:
# entry lateral, target medial, so the left and right screws converge.
ENTRY_X_FRACTION = {Side.LEFT: 0.30, Side.RIGHT: 0.70}
TARGET_X_FRACTION = {Side.LEFT: 0.55, Side.RIGHT: 0.45}
# Depth (LP horizontal axis): entry near the posterior surface, target deep.
ENTRY_DEPTH_FRACTION = 0.15
TARGET_DEPTH_FRACTION = 0.70

DEFAULT_DIAMETER_MM = 5.0
DEFAULT_SCREW_TYPE = "generic-pedicle"


@dataclass(frozen=True)
class Orientation:
    """Rotation (degrees clockwise) then optional horizontal flip."""

    rotation: int = 0
    flipped: bool = False

    def __post_init__(self):
        if self.rotation not in ROTATIONS:
            raise ValueError(f"rotation must be one of {ROTATIONS}, got {self.rotation}")

    def compose(self, rotation: int, flip: bool) -> "Orientation":
        """Total orientation after applying another rotate-then-flip on top.

        In the dihedral group, flip . rot(r2) . flip . rot(r1) equals
        rot(r1 - r2) with the flips cancelling, which is why a flipped
        state subtracts the new rotation.
        """
        if self.flipped:
            new_rot = (self.rotation - rotation) % 360
        else:
            new_rot = (self.rotation + rotation) % 360
        return Orientation(rotation=new_rot, flipped=self.flipped != flip)


@dataclass(frozen=True)
class ImageMeta:
    image_ref: str
    width: int
    height: int


@dataclass(frozen=True)
class ViewState:
    view_kind: ViewKind
    image_ref: str
    width: int
    height: int
    orientation: Orientation = Orientation()
    calibration: ViewCalibration = None  # type: ignore[assignment]
    boxes: tuple[BBox, ...] = ()

    def __post_init__(self):
        if self.calibration is None:
            object.__setattr__(self, "calibration", ViewCalibration(self.view_kind))


@dataclass(frozen=True)
class Session:
    id: str
    ap: ViewState
    lp: ViewState
    labels: LabelMap = field(default_factory=dict)
    screws: tuple[Screw, ...] = ()
    sync_captured: bool = False

    def view(self, kind: ViewKind) -> ViewState:
        return self.ap if kind is ViewKind.AP else self.lp

    def screw_by_id(self, screw_id: str) -> Screw:
        for screw in self.screws:
            if screw.id == screw_id:
                return screw
        raise UnknownScrew(f"no screw with id {screw_id!r}")


def _with_view(session: Session, view: ViewState) -> Session:
    if view.view_kind is ViewKind.AP:
        return replace(session, ap=view)
    return replace(session, lp=view)


def create_session(
    ap_meta: ImageMeta, lp_meta: ImageMeta, session_id: str | None = None
) -> Session:
    """Fresh session: identity calibrations, no labels, no screws.

    The two images may have different sizes; each view is calibrated on
    its own.  An explicit session_id makes scripted runs reproducible;
    by default a random one is issued.
    """
    for meta in (ap_meta, lp_meta):
        if meta.width <= 0 or meta.height <= 0:
            raise InvalidImage(
                f"image {meta.image_ref!r} has nonpositive size {meta.width}x{meta.height}"
            )
    return Session(
        id=session_id if session_id is not None else str(uuid.uuid4()),
        ap=ViewState(ViewKind.AP, ap_meta.image_ref, ap_meta.width, ap_meta.height),
        lp=ViewState(ViewKind.LP, lp_meta.image_ref, lp_meta.width, lp_meta.height),
    )


def _rotate_point(x: float, y: float, rotation: int, w: int, h: int) -> tuple[float, float]:
    """Clockwise rotation of an image point; (w, h) is the frame being rotated."""
    if rotation == 0:
        return x, y
    if rotation == 90:
        return h - y, x
    if rotation == 180:
        return w - x, h - y
    return y, w - x  # 270


def transform_box(box: BBox, rotation: int, flip: bool, w: int, h: int) -> BBox:
    """Re-express a box after rotating the w-by-h frame, then flipping."""
    corners = [
        _rotate_point(box.x1, box.y1, rotation, w, h),
        _rotate_point(box.x2, box.y2, rotation, w, h),
    ]
    if rotation in (90, 270):
        w = h  # flip happens in the rotated frame
    if flip:
        corners = [(w - x, y) for x, y in corners]
    (ax, ay), (bx, by) = corners
    return BBox(min(ax, bx), min(ay, by), max(ax, bx), max(ay, by), box.confidence)


def set_orientation(
    session: Session, view_kind: ViewKind, rotation: int, flip: bool
) -> Session:
    """Rotate/flip one view's frame, carrying its boxes and labels along.

    The transform is relative to what is currently displayed, so two
    successive 180-degree turns restore the original coordinates.  A 90
    or 270 turn swaps the view's width and height.  Screws live in world
    coordinates and are untouched.
    """
    if rotation not in ROTATIONS:
        raise ValueError(f"rotation must be one of {ROTATIONS}, got {rotation}")
    view = session.view(view_kind)
    w, h = view.width, view.height
    new_boxes = tuple(transform_box(b, rotation, flip, w, h) for b in view.boxes)
    new_w, new_h = (h, w) if rotation in (90, 270) else (w, h)
    new_view = replace(
        view,
        orientation=view.orientation.compose(rotation, flip),
        width=new_w,
        height=new_h,
        boxes=new_boxes,
    )
    new_labels: LabelMap = {
        key: (transform_box(box, rotation, flip, w, h) if key[0] is view_kind else box)
        for key, box in session.labels.items()
    }
    return replace(_with_view(session, new_view), labels=new_labels)


def attach_detections(
    session: Session, view_kind: ViewKind, boxes: Iterable[BBox]
) -> Session:
    """Replace one view's detections, cascading stale labels and screws.

    Labels whose box value survives in the new list are kept; labels for
    vanished boxes are dropped, and any screw whose vertebra is no longer
    paired goes with them.  Boxes must lie inside the image extent.
    """
    view = session.view(view_kind)
    new_boxes = tuple(boxes)
    for index, box in enumerate(new_boxes):
        if box.x1 < 0 or box.y1 < 0 or box.x2 > view.width or box.y2 > view.height:
            raise OutOfBounds(
                index,
                f"box {index} exceeds the {view_kind.value} image extent "
                f"{view.width}x{view.height}",
            )
    new_labels: LabelMap = {
        key: box
        for key, box in session.labels.items()
        if key[0] is not view_kind or box in new_boxes
    }
    new_screws = tuple(
        s for s in session.screws if paired_boxes(new_labels, s.vertebra_label)
    )
    session = _with_view(session, replace(view, boxes=new_boxes))
    return replace(session, labels=new_labels, screws=new_screws)


def apply_label(
    session: Session, view_kind: ViewKind, p: Point2, label: str
) -> tuple[Session, BBox]:
    """Label the clicked box in one view; see labeling.label_vertebra."""
    new_labels, box = label_vertebra(
        session.labels, view_kind, p, list(session.view(view_kind).boxes), label
    )
    return replace(session, labels=new_labels), box


def _capture_sync(session: Session, ap_box: BBox, lp_box: BBox) -> Session:
    dv = sync_offset_from_pair(
        ap_box, lp_box, session.ap.calibration, session.lp.calibration
    )
    lp_cal = replace(
        session.lp.calibration, v_offset=session.lp.calibration.v_offset - dv
    )
    session = _with_view(session, replace(session.lp, calibration=lp_cal))
    return replace(session, sync_captured=True)


def add_screw(session: Session, label: str, side: Side) -> tuple[Session, Screw]:
    """Place a screw with the default convergent trajectory in a labeled vertebra.

    Requires the label to be paired.  The first placement captures the
    AP/LP vertical offset from this vertebra's box pair.  Entry and
    target start at fixed fractions of the paired boxes (lateral entry,
    medial target; shallow entry, deep target) at the AP box's vertical
    center, which puts both projections strictly inside their boxes.
    """
    validate_label(label)
    pair = paired_boxes(session.labels, label)
    if pair is None:
        raise UnpairedLabel(f"label {label!r} is not paired in both views")
    for screw in session.screws:
        if screw.vertebra_label == label and screw.side is side:
            raise DuplicateScrew(f"screw for ({label}, {side.value}) already exists")
    if not session.sync_captured:
        session = _capture_sync(session, *pair)
    ap_box, lp_box = pair
    cal_ap = session.ap.calibration
    cal_lp = session.lp.calibration

    u_entry = ap_box.x1 + ENTRY_X_FRACTION[side] * (ap_box.x2 - ap_box.x1)
    u_target = ap_box.x1 + TARGET_X_FRACTION[side] * (ap_box.x2 - ap_box.x1)
    depth_entry = lp_box.x1 + ENTRY_DEPTH_FRACTION * (lp_box.x2 - lp_box.x1)
    depth_target = lp_box.x1 + TARGET_DEPTH_FRACTION * (lp_box.x2 - lp_box.x1)
    z = cal_ap.world_z(ap_box.v_center)

    screw = Screw(
        id=f"{label}-{side.value}",
        vertebra_label=label,
        side=side,
        entry=Point3(cal_ap.world_axis(u_entry), cal_lp.world_axis(depth_entry), z),
        target=Point3(cal_ap.world_axis(u_target), cal_lp.world_axis(depth_target), z),
        diameter=DEFAULT_DIAMETER_MM,
        screw_type=DEFAULT_SCREW_TYPE,
    )
    return replace(session, screws=session.screws + (screw,)), screw


def _replace_screw(session: Session, updated: Screw) -> Session:
    return replace(
        session,
        screws=tuple(updated if s.id == updated.id else s for s in session.screws),
    )


def move_endpoint(
    session: Session,
    screw_id: str,
    view_kind: ViewKind,
    endpoint: ScrewEndpoint,
    p: Point2,
) -> Session:
    """Drag one endpoint in one view; the paired view follows via shared z."""
    screw = session.screw_by_id(screw_id)
    view = session.view(view_kind)
    paired = session.view(view_kind.paired)
    moved = apply_drag(screw, view.calibration, endpoint, p, paired.calibration)
    return _replace_screw(session, moved)


def set_screw_params(
    session: Session,
    screw_id: str,
    diameter: float | None = None,
    screw_type: str | None = None,
) -> Session:
    """Adjust screw size and catalog name; geometry invariants still apply."""
    screw = session.screw_by_id(screw_id)
    updates: dict = {}
    if diameter is not None:
        updates["diameter"] = diameter
    if screw_type is not None:
        updates["screw_type"] = screw_type
    if not updates:
        return session
    return _replace_screw(session, replace(screw, **updates))


def export_plan(session: Session) -> PlanDocument:
    """Snapshot the screw list as a plan document.

    Screws are ordered by vertebra catalog position, left before right,
    so exporting an unchanged session is byte-deterministic.  Lengths are
    recomputed from the endpoints.
    """
    if not session.screws:
        raise EmptyPlan("no screws placed")
    side_order = {Side.LEFT: 0, Side.RIGHT: 1}
    ordered = sorted(
        session.screws,
        key=lambda s: (label_order(s.vertebra_label), side_order[s.side]),
    )
    plan_screws = tuple(
        PlanScrew(
            vertebra_label=s.vertebra_label,
            side=s.side,
            screw_type=s.screw_type,
            diameter=s.diameter,
            length=s.length,
            entry=s.entry,
            target=s.target,
            ap_entry=project(s.entry, session.ap.calibration),
            ap_target=project(s.target, session.ap.calibration),
            lp_entry=project(s.entry, session.lp.calibration),
            lp_target=project(s.target, session.lp.calibration),
        )
        for s in ordered
    )
    return PlanDocument(session_id=session.id, screws=plan_screws)


def validate_session(session: Session) -> None:
    """Raise if any session invariant is broken (used by tests and loading)."""
    for view in (session.ap, session.lp):
        expected = ViewKind.AP if view is session.ap else ViewKind.LP
        if view.view_kind is not expected:
            raise ValueError(f"view slot {expected.value} holds {view.view_kind.value}")
        if view.calibration.view_kind is not view.view_kind:
            raise ValueError(f"{view.view_kind.value} calibration tagged for wrong view")
        if view.width <= 0 or view.height <= 0:
            raise InvalidImage(f"{view.view_kind.value} image size is nonpositive")
        for index, box in enumerate(view.boxes):
            if box.x1 < 0 or box.y1 < 0 or box.x2 > view.width or box.y2 > view.height:
                raise OutOfBounds(index, f"box {index} outside {view.view_kind.value}")
    seen_boxes: dict[ViewKind, set[BBox]] = {ViewKind.AP: set(), ViewKind.LP: set()}
    for (view_kind, label), box in session.labels.items():
        validate_label(label)
        if box not in session.view(view_kind).boxes:
            raise ValueError(f"label {label} bound to a box absent from {view_kind.value}")
        if box in seen_boxes[view_kind]:
            raise ValueError(f"two labels share one box in {view_kind.value}")
        seen_boxes[view_kind].add(box)
    ids = [s.id for s in session.screws]
    if len(set(ids)) != len(ids):
        raise ValueError("screw ids are not unique")
    placements = [(s.vertebra_label, s.side) for s in session.screws]
    if len(set(placements)) != len(placements):
        raise DuplicateScrew("two screws share a (vertebra, side)")
    for screw in session.screws:
        validate_label(screw.vertebra_label)
        if paired_boxes(session.labels, screw.vertebra_label) is None:
            raise UnpairedLabel(f"screw {screw.id} references unpaired label")

"""Wire schemas and converters between core types and JSON bodies."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..bbox import BBox
from ..errors import DegenerateProjection
from ..geometry import (
    Point2,
    Screw,
    Side,
    ViewKind,
    cylinder_silhouette,
    project,
)
from ..session import Session, ViewState

ViewName = Literal["AP", "LP"]
SideName = Literal["left", "right"]
EndpointName = Literal["entry", "target"]


class ImageIn(BaseModel):
    image_ref: str
    width: int
    height: int


class CreateSessionIn(BaseModel):
    ap: ImageIn
    lp: ImageIn
    session_id: Optional[str] = Field(default=None, min_length=1)


class BoxBody(BaseModel):
    x1: float
    y1: float
    x2: float
    y2: float
    confidence: float


class DetectionsIn(BaseModel):
    view: ViewName
    boxes: list[BoxBody]


class OrientationIn(BaseModel):
    view: ViewName
    rotation: Literal[0, 90, 180, 270]
    flip: bool = False


class LabelIn(BaseModel):
    view: ViewName
    u: float
    v: float
    label: str


class AddScrewIn(BaseModel):
    label: str
    side: SideName


class EndpointPatch(BaseModel):
    view: ViewName
    endpoint: EndpointName
    u: float
    v: float


class ParamsPatch(BaseModel):
    diameter: Optional[float] = None
    screw_type: Optional[str] = None


class Point2Out(BaseModel):
    u: float
    v: float


class Point3Out(BaseModel):
    x: float
    y: float
    z: float


class OrientationOut(BaseModel):
    rotation: int
    flipped: bool


class CalibrationOut(BaseModel):
    scale: float
    v_offset: float


class ViewOut(BaseModel):
    view_kind: ViewName
    image_ref: str
    width: int
    height: int
    orientation: OrientationOut
    calibration: CalibrationOut
    boxes: list[BoxBody]


class LabelOut(BaseModel):
    view: ViewName
    label: str
    box: BoxBody


class ViewProjectionOut(BaseModel):
    entry: Point2Out
    target: Point2Out
    # None when the screw projects to a single point in this view
    silhouette: Optional[list[Point2Out]] = None


class ScrewOut(BaseModel):
    id: str
    vertebra_label: str
    side: SideName
    diameter: float
    screw_type: str
    length: float
    entry: Point3Out
    target: Point3Out
    ap: ViewProjectionOut
    lp: ViewProjectionOut


class LabelResult(BaseModel):
    view: ViewName
    label: str
    box: BoxBody
    marker: Point2Out


class DetectionsOut(BaseModel):
    ap_boxes: list[BoxBody]
    lp_boxes: list[BoxBody]


class SessionSnapshot(BaseModel):
    id: str
    ap: ViewOut
    lp: ViewOut
    labels: list[LabelOut]
    screws: list[ScrewOut]
    sync_captured: bool


class ErrorOut(BaseModel):
    code: str
    message: str
    detail: object = None


def box_body(box: BBox) -> BoxBody:
    return BoxBody(
        x1=box.x1, y1=box.y1, x2=box.x2, y2=box.y2, confidence=box.confidence
    )


def box_from_body(body: BoxBody) -> BBox:
    return BBox(body.x1, body.y1, body.x2, body.y2, body.confidence)


def point2_out(p: Point2) -> Point2Out:
    return Point2Out(u=p.u, v=p.v)


def _view_projection(screw: Screw, view: ViewState) -> ViewProjectionOut:
    cal = view.calibration
    try:
        quad = [point2_out(p) for p in cylinder_silhouette(screw, cal)]
    except DegenerateProjection:
        quad = None
    return ViewProjectionOut(
        entry=point2_out(project(screw.entry, cal)),
        target=point2_out(project(screw.target, cal)),
        silhouette=quad,
    )


def screw_out(screw: Screw, session: Session) -> ScrewOut:
    return ScrewOut(
        id=screw.id,
        vertebra_label=screw.vertebra_label,
        side=screw.side.value,
        diameter=screw.diameter,
        screw_type=screw.screw_type,
        length=screw.length,
        entry=Point3Out(x=screw.entry.x, y=screw.entry.y, z=screw.entry.z),
        target=Point3Out(x=screw.target.x, y=screw.target.y, z=screw.target.z),
        ap=_view_projection(screw, session.ap),
        lp=_view_projection(screw, session.lp),
    )


def view_out(view: ViewState) -> ViewOut:
    return ViewOut(
        view_kind=view.view_kind.value,
        image_ref=view.image_ref,
        width=view.width,
        height=view.height,
        orientation=OrientationOut(
            rotation=view.orientation.rotation, flipped=view.orientation.flipped
        ),
        calibration=CalibrationOut(
            scale=view.calibration.scale, v_offset=view.calibration.v_offset
        ),
        boxes=[box_body(b) for b in view.boxes],
    )


def snapshot(session: Session) -> SessionSnapshot:
    labels = sorted(session.labels.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))
    return SessionSnapshot(
        id=session.id,
        ap=view_out(session.ap),
        lp=view_out(session.lp),
        labels=[
            LabelOut(view=key[0].value, label=key[1], box=box_body(box))
            for key, box in labels
        ],
        screws=[screw_out(s, session) for s in session.screws],
        sync_captured=session.sync_captured,
    )


def view_kind(name: ViewName) -> ViewKind:
    return ViewKind(name)


def side(name: SideName) -> Side:
    return Side(name)

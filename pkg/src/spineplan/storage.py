"""Session persistence: versioned text stream, lossless round trip.

Format "spine-session/1": UTF-8 JSON with a leading "format" field.
Label entries are stored in canonical order (view, catalog position) and
screws in placement order, so save -> load -> save is byte-identical.
Any defect in the stream, from bad bytes to a broken session invariant,
surfaces as CorruptSession.
"""

from __future__ import annotations

import json

from .bbox import BBox
from .errors import CorruptSession, PlanningError
from .geometry import Point3, Screw, Side, ViewCalibration, ViewKind
from .labeling import LabelMap, label_order
from .session import Orientation, Session, ViewState, validate_session

SESSION_FORMAT = "spine-session/1"


def _box_fields(b: BBox) -> list[float]:
    return [b.x1, b.y1, b.x2, b.y2, b.confidence]


def _view_body(view: ViewState) -> dict:
    return {
        "image_ref": view.image_ref,
        "width": view.width,
        "height": view.height,
        "orientation": {
            "rotation": view.orientation.rotation,
            "flipped": view.orientation.flipped,
        },
        "calibration": {
            "scale": view.calibration.scale,
            "v_offset": view.calibration.v_offset,
        },
        "boxes": [_box_fields(b) for b in view.boxes],
    }


def save_session(session: Session) -> bytes:
    """Serialize the full session; see module docstring for determinism."""
    labels = sorted(
        session.labels.items(), key=lambda kv: (kv[0][0].value, label_order(kv[0][1]))
    )
    body = {
        "format": SESSION_FORMAT,
        "id": session.id,
        "sync_captured": session.sync_captured,
        "views": {
            "AP": _view_body(session.ap),
            "LP": _view_body(session.lp),
        },
        "labels": [
            {"view": key[0].value, "label": key[1], "box": _box_fields(box)}
            for key, box in labels
        ],
        "screws": [
            {
                "id": s.id,
                "vertebra_label": s.vertebra_label,
                "side": s.side.value,
                "entry": [s.entry.x, s.entry.y, s.entry.z],
                "target": [s.target.x, s.target.y, s.target.z],
                "diameter": s.diameter,
                "screw_type": s.screw_type,
            }
            for s in session.screws
        ],
    }
    return (json.dumps(body, indent=2) + "\n").encode("utf-8")


def _load_view(kind: ViewKind, body: dict) -> ViewState:
    return ViewState(
        view_kind=kind,
        image_ref=body["image_ref"],
        width=body["width"],
        height=body["height"],
        orientation=Orientation(
            rotation=body["orientation"]["rotation"],
            flipped=bool(body["orientation"]["flipped"]),
        ),
        calibration=ViewCalibration(
            view_kind=kind,
            scale=body["calibration"]["scale"],
            v_offset=body["calibration"]["v_offset"],
        ),
        boxes=tuple(BBox(*fields) for fields in body["boxes"]),
    )


def load_session(data: bytes) -> Session:
    """Reconstruct a session, or raise CorruptSession for any defect."""
    try:
        body = json.loads(data.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptSession(f"stream is not valid JSON: {exc}") from None
    if not isinstance(body, dict) or body.get("format") != SESSION_FORMAT:
        raise CorruptSession(f"expected format {SESSION_FORMAT!r}")
    try:
        labels: LabelMap = {}
        for item in body["labels"]:
            key = (ViewKind(item["view"]), item["label"])
            if key in labels:
                raise CorruptSession(f"duplicate label entry {item['label']!r}")
            labels[key] = BBox(*item["box"])
        session = Session(
            id=body["id"],
            ap=_load_view(ViewKind.AP, body["views"]["AP"]),
            lp=_load_view(ViewKind.LP, body["views"]["LP"]),
            labels=labels,
            screws=tuple(
                Screw(
                    id=item["id"],
                    vertebra_label=item["vertebra_label"],
                    side=Side(item["side"]),
                    entry=Point3(*item["entry"]),
                    target=Point3(*item["target"]),
                    diameter=item["diameter"],
                    screw_type=item["screw_type"],
                )
                for item in body["screws"]
            ),
            sync_captured=bool(body["sync_captured"]),
        )
        if not isinstance(session.id, str):
            raise CorruptSession("session id must be a string")
        validate_session(session)
    except CorruptSession:
        raise
    except (PlanningError, KeyError, TypeError, ValueError) as exc:
        raise CorruptSession(f"invalid session state: {exc}") from None
    return session

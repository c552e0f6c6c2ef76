"""The exported surgical plan: a versioned, deterministic text document.

Format "spine-plan/1" is a JSON key-value tree with a leading "format"
field, two-space indentation, and a trailing newline.  Floats are
emitted with repr, so parse(render(doc)) reproduces every value exactly
and render is byte-deterministic for a given document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CorruptSession, EmptyPlan
from .geometry import Point2, Point3, Side

PLAN_FORMAT = "spine-plan/1"

LENGTH_RECHECK_TOL = 1e-6


@dataclass(frozen=True)
class PlanScrew:
    """One planned screw: identity, size, and both-view placements."""

    vertebra_label: str
    side: Side
    screw_type: str
    diameter: float
    length: float
    entry: Point3
    target: Point3
    ap_entry: Point2
    ap_target: Point2
    lp_entry: Point2
    lp_target: Point2


@dataclass(frozen=True)
class PlanDocument:
    session_id: str
    screws: tuple[PlanScrew, ...]


def _point3(p: Point3) -> dict:
    return {"x": p.x, "y": p.y, "z": p.z}


def _point2(p: Point2) -> dict:
    return {"u": p.u, "v": p.v}


def render_plan(doc: PlanDocument) -> str:
    """Serialize a plan; key order is fixed so equal documents render equal bytes."""
    body = {
        "format": PLAN_FORMAT,
        "session_id": doc.session_id,
        "screws": [
            {
                "vertebra_label": s.vertebra_label,
                "side": s.side.value,
                "screw_type": s.screw_type,
                "diameter_mm": s.diameter,
                "length_mm": s.length,
                "entry_mm": _point3(s.entry),
                "target_mm": _point3(s.target),
                "projections_px": {
                    "AP": {"entry": _point2(s.ap_entry), "target": _point2(s.ap_target)},
                    "LP": {"entry": _point2(s.lp_entry), "target": _point2(s.lp_target)},
                },
            }
            for s in doc.screws
        ],
    }
    return json.dumps(body, indent=2) + "\n"


def parse_plan(text: str) -> PlanDocument:
    """Parse and re-validate a plan document.

    Raises CorruptSession on version mismatch, bad syntax, or a stored
    length that disagrees with the endpoints by more than 1e-6 mm.
    """
    try:
        body = json.loads(text)
    except (ValueError, TypeError) as exc:
        raise CorruptSession(f"plan is not valid JSON: {exc}") from None
    if not isinstance(body, dict) or body.get("format") != PLAN_FORMAT:
        raise CorruptSession(f"expected format {PLAN_FORMAT!r}")
    try:
        screws = []
        for item in body["screws"]:
            entry = Point3(**item["entry_mm"])
            target = Point3(**item["target_mm"])
            proj = item["projections_px"]
            screw = PlanScrew(
                vertebra_label=item["vertebra_label"],
                side=Side(item["side"]),
                screw_type=item["screw_type"],
                diameter=item["diameter_mm"],
                length=item["length_mm"],
                entry=entry,
                target=target,
                ap_entry=Point2(**proj["AP"]["entry"]),
                ap_target=Point2(**proj["AP"]["target"]),
                lp_entry=Point2(**proj["LP"]["entry"]),
                lp_target=Point2(**proj["LP"]["target"]),
            )
            recomputed = ((target.x - entry.x) ** 2 + (target.y - entry.y) ** 2
                          + (target.z - entry.z) ** 2) ** 0.5
            if abs(recomputed - screw.length) > LENGTH_RECHECK_TOL:
                raise CorruptSession(
                    f"stored length {screw.length} disagrees with endpoints "
                    f"({recomputed})"
                )
            screws.append(screw)
        doc = PlanDocument(session_id=body["session_id"], screws=tuple(screws))
    except CorruptSession:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSession(f"malformed plan document: {exc}") from None
    if not doc.screws:
        raise EmptyPlan("plan document lists no screws")
    return doc

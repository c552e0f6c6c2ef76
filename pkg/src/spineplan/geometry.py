"""Screws as 3-D cylinders and their projections onto the AP and LP planes.

World frame (mm): x runs patient left to right, y posterior to anterior,
z along the spine axis.  z grows in the image-down direction so an
identity calibration makes image v equal world z.  The AP view shows
(x, z) and drops y; the LP view shows (y, z) and drops x.  z is the axis
the two views share: any edit in one view pins the other view's vertical
coordinate, which is the whole synchronization story.

Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING

from .errors import DegenerateProjection, DegenerateScrew

if TYPE_CHECKING:
    from .bbox import BBox


class ViewKind(str, Enum):
    AP = "AP"
    LP = "LP"

    @property
    def paired(self) -> "ViewKind":
        return ViewKind.LP if self is ViewKind.AP else ViewKind.AP


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class ScrewEndpoint(str, Enum):
    ENTRY = "entry"
    TARGET = "target"


@dataclass(frozen=True)
class Point3:
    """World-space point in mm."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class Point2:
    """Image-space point in px; u grows right, v grows down."""

    u: float
    v: float


@dataclass(frozen=True)
class ViewCalibration:
    """Maps one view's pixels to world mm.

    Pixels are isotropic: one ``scale`` (mm per px) serves both axes.
    The shared axis obeys z = scale * (v - v_offset); the in-plane axis
    (x for AP, y for LP) obeys axis = scale * u.
    """

    view_kind: ViewKind
    scale: float = 1.0
    v_offset: float = 0.0

    def __post_init__(self):
        if not (self.scale > 0):
            raise ValueError(f"calibration scale must be > 0, got {self.scale}")

    def world_z(self, v: float) -> float:
        """World z for an image row."""
        return self.scale * (v - self.v_offset)

    def v_for_z(self, z: float) -> float:
        """Image row for a world z."""
        return z / self.scale + self.v_offset

    def world_axis(self, u: float) -> float:
        """World coordinate of this view's horizontal axis (x for AP, y for LP)."""
        return u * self.scale

    def u_for_axis(self, value: float) -> float:
        return value / self.scale


@dataclass(frozen=True)
class Screw:
    """Cylinder between the centers of its two circular bases.

    ``entry`` is where the surgeon starts the trajectory on the vertebra
    surface; ``target`` is the intended endpoint inside the bone.
    """

    id: str
    vertebra_label: str
    side: Side
    entry: Point3
    target: Point3
    diameter: float = 5.0
    screw_type: str = "generic-pedicle"

    def __post_init__(self):
        if self.entry == self.target:
            raise DegenerateScrew(f"screw {self.id!r}: entry equals target")
        if not (self.diameter > 0):
            raise DegenerateScrew(
                f"screw {self.id!r}: diameter must be > 0, got {self.diameter}"
            )

    @property
    def length(self) -> float:
        return screw_length(self.entry, self.target)


def screw_length(entry: Point3, target: Point3) -> float:
    """Euclidean distance between entry and target in mm.

    Raises DegenerateScrew when the points coincide exactly.
    """
    if entry == target:
        raise DegenerateScrew("entry equals target")
    return math.dist((entry.x, entry.y, entry.z), (target.x, target.y, target.z))


def project(p: Point3, cal: ViewCalibration) -> Point2:
    """Orthographic projection of a world point into one view's pixels."""
    axis = p.x if cal.view_kind is ViewKind.AP else p.y
    return Point2(u=cal.u_for_axis(axis), v=cal.v_for_z(p.z))


def apply_drag(
    screw: Screw,
    view: ViewCalibration,
    endpoint: ScrewEndpoint,
    new_pos: Point2,
    paired_cal: ViewCalibration,
) -> Screw:
    """Move one screw endpoint to a new image position in one view.

    The drag fixes the two world coordinates visible in this view (x and
    z for AP, y and z for LP) and keeps the dropped coordinate.  Because
    z is a world quantity, the paired view's v follows automatically:
    paired_cal is part of the contract but needs no arithmetic here.
    """
    del paired_cal  # sync holds by construction: z is shared world state
    old = screw.entry if endpoint is ScrewEndpoint.ENTRY else screw.target
    z = view.world_z(new_pos.v)
    if view.view_kind is ViewKind.AP:
        moved = Point3(x=view.world_axis(new_pos.u), y=old.y, z=z)
    else:
        moved = Point3(x=old.x, y=view.world_axis(new_pos.u), z=z)
    if endpoint is ScrewEndpoint.ENTRY:
        return replace(screw, entry=moved)
    return replace(screw, target=moved)


def sync_offset_from_pair(
    box_ap: "BBox",
    box_lp: "BBox",
    cal_ap: ViewCalibration,
    cal_lp: ViewCalibration,
) -> float:
    """Vertical misalignment (px) between one vertebra's AP and LP boxes.

    Returns dv = v_center(AP box) - v_center(LP box).  Subtracting dv
    from the LP v_offset makes the vertebra occupy the same world-z band
    in both views.  The calibrations are accepted for interface symmetry;
    with the isotropic single-scale model the pixel difference is the
    whole story, so they are unused.
    """
    del cal_ap, cal_lp
    return box_ap.v_center - box_lp.v_center


def cylinder_silhouette(
    screw: Screw, cal: ViewCalibration
) -> tuple[Point2, Point2, Point2, Point2]:
    """Rectangle outlining the cylinder body in one view.

    The long axis is the projected entry-to-target segment; the half
    width is (diameter / 2) / scale px.  Corners are ordered counter-
    clockwise (in u-v axes) starting beside the entry point:
    entry + n, entry - n, target - n, target + n, where n is the segment
    direction rotated a quarter turn.
    """
    e = project(screw.entry, cal)
    t = project(screw.target, cal)
    du, dv = t.u - e.u, t.v - e.v
    seg = math.hypot(du, dv)
    if seg == 0.0:
        raise DegenerateProjection(
            f"screw {screw.id!r} projects to a point in the {cal.view_kind.value} view"
        )
    half_w = (screw.diameter / 2.0) / cal.scale
    # quarter-turn of the unit direction: (du, dv) -> (-dv, du)
    nu, nv = -dv / seg * half_w, du / seg * half_w
    return (
        Point2(e.u + nu, e.v + nv),
        Point2(e.u - nu, e.v - nv),
        Point2(t.u - nu, t.v - nv),
        Point2(t.u + nu, t.v + nv),
    )

"""Biplanar pedicle-screw planning: geometry core, sessions, service, CLI."""

__version__ = "0.1.0"

from .bbox import BBox, hit_test, parse_bbox_file, serialize_bboxes
from .geometry import (
    Point2,
    Point3,
    Screw,
    ScrewEndpoint,
    Side,
    ViewCalibration,
    ViewKind,
    apply_drag,
    cylinder_silhouette,
    project,
    screw_length,
    sync_offset_from_pair,
)
from .config import ServiceConfig, load_config
from .labeling import VERTEBRA_LABELS, label_vertebra, paired_boxes
from .plandoc import PlanDocument, PlanScrew, parse_plan, render_plan
from .session import (
    ImageMeta,
    Orientation,
    Session,
    ViewState,
    add_screw,
    attach_detections,
    create_session,
    export_plan,
    move_endpoint,
    set_orientation,
    set_screw_params,
)
from .storage import load_session, save_session

__all__ = [
    "BBox",
    "ImageMeta",
    "Orientation",
    "PlanDocument",
    "PlanScrew",
    "Point2",
    "Point3",
    "Screw",
    "ScrewEndpoint",
    "ServiceConfig",
    "Session",
    "Side",
    "VERTEBRA_LABELS",
    "ViewCalibration",
    "ViewKind",
    "ViewState",
    "add_screw",
    "apply_drag",
    "attach_detections",
    "create_session",
    "cylinder_silhouette",
    "export_plan",
    "hit_test",
    "label_vertebra",
    "load_config",
    "load_session",
    "move_endpoint",
    "paired_boxes",
    "parse_bbox_file",
    "parse_plan",
    "project",
    "render_plan",
    "save_session",
    "screw_length",
    "serialize_bboxes",
    "set_orientation",
    "set_screw_params",
    "sync_offset_from_pair",
]

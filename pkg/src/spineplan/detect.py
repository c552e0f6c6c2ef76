"""External detector integration.

The detector is a separate process honoring a file contract: given an
image path it writes ``<stem>.txt`` (one box per line) into an output
directory and exits 0.  The service can also run from a directory of
precomputed box files, which keeps tests and demos hermetic.  Either
way this module never imports ML code.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
from pathlib import Path

from .bbox import BBox, parse_bbox_file
from .config import ServiceConfig
from .errors import DetectorFailed, OutOfBounds, ParseError
from .geometry import ViewKind
from .session import Session, attach_detections

DETECTOR_TIMEOUT_S = 120


def _image_path(image_ref: str, config: ServiceConfig) -> Path:
    path = Path(image_ref)
    if not path.is_absolute() and config.fixture_root:
        return Path(config.fixture_root) / path
    return path


def _read_boxes(txt_path: Path, source: str) -> list[BBox]:
    try:
        text = txt_path.read_text(encoding="utf-8")
    except OSError as err:
        raise DetectorFailed(
            f"{source} produced no readable {txt_path.name}: {err}"
        ) from err
    try:
        return parse_bbox_file(text)
    except ParseError as err:
        raise DetectorFailed(
            f"{source} wrote malformed {txt_path.name}: {err.message}",
            detail={"line_no": err.line_no},
        ) from err


def _run_command(template: str, image: Path, outdir: Path) -> list[BBox]:
    args = [tok.format(image=str(image), outdir=str(outdir)) for tok in shlex.split(template)]
    try:
        proc = subprocess.run(
            args, capture_output=True, text=True, timeout=DETECTOR_TIMEOUT_S
        )
    except (OSError, subprocess.TimeoutExpired) as err:
        raise DetectorFailed(f"detector did not run: {err}") from err
    if proc.returncode != 0:
        raise DetectorFailed(
            f"detector exited {proc.returncode}",
            detail={"exit_status": proc.returncode, "stderr": proc.stderr[-2000:]},
        )
    return _read_boxes(outdir / f"{image.stem}.txt", "detector")


def detect_boxes(image_ref: str, config: ServiceConfig) -> list[BBox]:
    """Produce boxes for one image via the configured detector."""
    if config.detector_command:
        image = _image_path(image_ref, config)
        with tempfile.TemporaryDirectory(prefix="spineplan-det-") as outdir:
            return _run_command(config.detector_command, image, Path(outdir))
    if config.bbox_dir:
        stem = Path(image_ref).stem
        return _read_boxes(Path(config.bbox_dir) / f"{stem}.txt", "bbox directory")
    raise DetectorFailed("no detector configured (detector_command or bbox_dir)")


def run_detection(session: Session, config: ServiceConfig) -> Session:
    """Detect on both views and attach the results.

    Both views are detected before either is attached, so a failure on
    the second view leaves the session untouched.  Boxes that fall
    outside the image are a detector fault, not a client fault.
    """
    results: dict[ViewKind, list[BBox]] = {}
    for view in (session.ap, session.lp):
        results[view.view_kind] = detect_boxes(view.image_ref, config)
    for view_kind, boxes in results.items():
        try:
            session = attach_detections(session, view_kind, boxes)
        except OutOfBounds as err:
            raise DetectorFailed(
                f"detector box outside the {view_kind.value} image: {err.message}",
                detail=err.detail,
            ) from err
    return session

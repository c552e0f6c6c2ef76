"""Shared fixtures: fake detectors and randomized session builders."""

import shutil
import sys
from pathlib import Path

import pytest

from spineplan.bbox import BBox
from spineplan.geometry import Point2, Side, ViewKind
from spineplan.session import (
    ImageMeta,
    add_screw,
    apply_label,
    attach_detections,
    create_session,
    set_orientation,
)

FIXTURES = Path(__file__).parent / "fixtures"


def random_session(rng):
    """A session with random boxes, labels, screws, maybe an orientation."""
    s = create_session(
        ImageMeta("ap.png", 512, 512),
        ImageMeta("lp.png", 512, 512),
        session_id=f"rand-{rng.randrange(10**6)}",
    )

    def rand_box(ymin):
        x1 = rng.uniform(0, 200)
        y1 = rng.uniform(ymin, ymin + 20)
        return BBox(
            x1, y1, x1 + rng.uniform(10, 100), y1 + rng.uniform(10, 60), rng.random()
        )

    labels = rng.sample(["L1", "L2", "L3", "L4", "L5"], k=rng.randrange(1, 4))
    ap_boxes = [rand_box(120 * i) for i in range(len(labels))]
    lp_boxes = [rand_box(120 * i) for i in range(len(labels))]
    s = attach_detections(s, ViewKind.AP, ap_boxes)
    s = attach_detections(s, ViewKind.LP, lp_boxes)
    for label, ab, lb in zip(labels, ap_boxes, lp_boxes):
        s, _ = apply_label(s, ViewKind.AP, Point2(ab.x1, ab.y1), label)
        s, _ = apply_label(s, ViewKind.LP, Point2(lb.x1, lb.y1), label)
    for label in labels:
        if rng.random() < 0.7:
            s, _ = add_screw(s, label, rng.choice(list(Side)))
    if rng.random() < 0.5:
        s = set_orientation(
            s, ViewKind.AP, rng.choice([90, 180, 270]), rng.random() < 0.5
        )
    return s

# Replays <stem>.txt from its own directory, honoring the file contract.
FAKE_DETECTOR = """\
import pathlib, shutil, sys
image = pathlib.Path(sys.argv[1])
outdir = pathlib.Path(sys.argv[2])
here = pathlib.Path(__file__).parent
shutil.copy(here / (image.stem + ".txt"), outdir / (image.stem + ".txt"))
"""

BROKEN_DETECTOR = """\
import pathlib, sys
outdir = pathlib.Path(sys.argv[2])
stem = pathlib.Path(sys.argv[1]).stem
(outdir / (stem + ".txt")).write_text("10 20 30\\n")
"""

CRASHING_DETECTOR = "import sys; sys.exit(3)\n"


def _command(tmp_path: Path, name: str, source: str) -> str:
    script = tmp_path / name
    script.write_text(source)
    return f"{sys.executable} {script} {{image}} {{outdir}}"


@pytest.fixture
def stub_detector_cmd(tmp_path):
    shutil.copy(FIXTURES / "ap.txt", tmp_path / "ap.txt")
    shutil.copy(FIXTURES / "lp.txt", tmp_path / "lp.txt")
    return _command(tmp_path, "fake_detector.py", FAKE_DETECTOR)


@pytest.fixture
def broken_detector_cmd(tmp_path):
    return _command(tmp_path, "broken_detector.py", BROKEN_DETECTOR)


@pytest.fixture
def crashing_detector_cmd(tmp_path):
    return _command(tmp_path, "crashing_detector.py", CRASHING_DETECTOR)

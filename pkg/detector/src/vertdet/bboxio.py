"""Detection box files: one `x1 y1 x2 y2 confidence` line per box.

The format is the wire contract with the planning service, so this
package owns its own reader/writer rather than importing the planner.
Floats are serialized with repr() and parse back bit-identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import BoxFileError


@dataclass(frozen=True)
class Detection:
    x1: float
    y1: float
    x2: float
    y2: float
    confidence: float

    def area(self) -> float:
        return max(0.0, self.x2 - self.x1) * max(0.0, self.y2 - self.y1)


def format_detections(detections: list[Detection]) -> str:
    lines = []
    for d in detections:
        lines.append(f"{d.x1!r} {d.y1!r} {d.x2!r} {d.y2!r} {d.confidence!r}\n")
    return "".join(lines)


def emit_bbox_file(detections: list[Detection], image_stem: str, outdir: str | Path) -> Path:
    out = Path(outdir) / f"{image_stem}.txt"
    try:
        out.write_text(format_detections(detections), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write detections to {out}: {exc}") from exc
    return out


def parse_detections(text: str) -> list[Detection]:
    boxes: list[Detection] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 5:
            raise BoxFileError(line_no, f"expected 5 fields, got {len(fields)}")
        try:
            x1, y1, x2, y2, conf = (float(f) for f in fields)
        except ValueError:
            raise BoxFileError(line_no, "fields must be numeric") from None
        if not all(math.isfinite(v) for v in (x1, y1, x2, y2, conf)):
            raise BoxFileError(line_no, "fields must be finite")
        if x2 <= x1 or y2 <= y1:
            raise BoxFileError(line_no, "box must have positive extent")
        boxes.append(Detection(x1, y1, x2, y2, conf))
    return boxes


def load_bbox_file(path: str | Path) -> list[Detection]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read detections from {p}: {exc}") from exc
    return parse_detections(text)

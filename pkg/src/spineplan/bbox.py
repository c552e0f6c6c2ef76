"""Detection bounding boxes: the text-file contract and click hit-testing.

The detector hands boxes to the planner through plain text files, one
box per line::

    x1 y1 x2 y2 confidence

Five whitespace-separated decimals; (x1, y1) is the top-left corner,
(x2, y2) the bottom-right, confidence in [0, 1].  Blank lines and lines
starting with ``#`` are ignored.  Detectors without a confidence score
emit 1.0.  Numbers are serialized with repr so a parse/serialize round
trip is exact at double precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidBox, ParseError
from .geometry import Point2

FIELDS_PER_LINE = 5


@dataclass(frozen=True)
class BBox:
    """Axis-aligned detection box in image px, top-left / bottom-right."""

    x1: float
    y1: float
    x2: float
    y2: float
    confidence: float

    def __post_init__(self):
        if not self.x1 < self.x2:
            raise InvalidBox(f"x1 >= x2 ({self.x1} >= {self.x2})")
        if not self.y1 < self.y2:
            raise InvalidBox(f"y1 >= y2 ({self.y1} >= {self.y2})")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidBox(f"confidence {self.confidence} outside [0, 1]")

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    @property
    def v_center(self) -> float:
        return (self.y1 + self.y2) / 2.0

    def contains(self, p: Point2) -> bool:
        """Boundary-inclusive containment, so edge clicks count as hits."""
        return self.x1 <= p.u <= self.x2 and self.y1 <= p.v <= self.y2


def parse_bbox_file(text: str) -> list[BBox]:
    """Parse detector output text into boxes, preserving line order.

    Raises ParseError with a 1-based line number on the first bad line:
    wrong field count, non-numeric token, inverted corners, or
    confidence outside [0, 1].  LF and CRLF are both accepted.
    """
    boxes: list[BBox] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != FIELDS_PER_LINE:
            raise ParseError(
                line_no, f"expected {FIELDS_PER_LINE} fields, got {len(fields)}"
            )
        values = []
        for token in fields:
            try:
                value = float(token)
            except ValueError:
                raise ParseError(line_no, f"non-numeric token {token!r}") from None
            if value != value or value in (float("inf"), float("-inf")):
                raise ParseError(line_no, f"non-finite value {token!r}")
            values.append(value)
        x1, y1, x2, y2, confidence = values
        if x1 >= x2:
            raise ParseError(line_no, "x1 >= x2")
        if y1 >= y2:
            raise ParseError(line_no, "y1 >= y2")
        if not 0.0 <= confidence <= 1.0:
            raise ParseError(line_no, f"confidence {confidence} outside [0, 1]")
        boxes.append(BBox(x1, y1, x2, y2, confidence))
    return boxes


def serialize_bboxes(boxes: list[BBox]) -> str:
    """Render boxes in the file grammar; repr keeps doubles exact."""
    return "".join(
        f"{b.x1!r} {b.y1!r} {b.x2!r} {b.y2!r} {b.confidence!r}\n" for b in boxes
    )


def load_bbox_file(path: str | Path) -> list[BBox]:
    return parse_bbox_file(Path(path).read_text(encoding="utf-8"))


def hit_test(p: Point2, boxes: list[BBox]) -> BBox | None:
    """Resolve a click to the box it lands in, or None for a miss.

    Among several containing boxes the smallest area wins, then the
    highest confidence, then the earliest file order.  A None result is
    the "no comparable bounding box" pop-up condition, not a fault.
    """
    best: BBox | None = None
    best_key: tuple[float, float, int] | None = None
    for index, box in enumerate(boxes):
        if not box.contains(p):
            continue
        key = (box.area, -box.confidence, index)
        if best_key is None or key < best_key:
            best, best_key = box, key
    return best

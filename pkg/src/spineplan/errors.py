"""Error taxonomy shared by the core, the service layer, and the CLI.

Every error carries a stable ``code`` string; the service maps codes to
HTTP statuses and the CLI prints them verbatim, so the two surfaces stay
in sync by construction.
"""


class PlanningError(Exception):
    """Base class for all domain errors."""

    code = "PLANNING_ERROR"

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class DegenerateScrew(PlanningError):
    """Entry and target points coincide; a screw needs positive length."""

    code = "DEGENERATE_SCREW"


class DegenerateProjection(PlanningError):
    """Screw axis is parallel to the view's dropped axis; it projects to a point."""

    code = "DEGENERATE_PROJECTION"


class InvalidBox(PlanningError):
    """Bounding box violates x1 < x2, y1 < y2 or confidence not in [0, 1]."""

    code = "INVALID_BOX"


class ParseError(PlanningError):
    """Bbox file line failed to parse; ``line_no`` is 1-based."""

    code = "PARSE_ERROR"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}", detail={"line_no": line_no})
        self.line_no = line_no
        self.reason = reason


class NoMatchingBox(PlanningError):
    """Click hit no detection box; the UI surfaces this as a pop-up."""

    code = "NO_MATCHING_BOX"


class DuplicateBox(PlanningError):
    """The clicked box is already bound to a different label in this view."""

    code = "DUPLICATE_BOX"


class UnknownLabel(PlanningError):
    """Vertebra name outside the C1-S1 catalog."""

    code = "UNKNOWN_LABEL"


class UnpairedLabel(PlanningError):
    """Label is not present in both views, so no screw can be placed."""

    code = "UNPAIRED_LABEL"


class InvalidImage(PlanningError):
    """Image metadata has nonpositive dimensions."""

    code = "INVALID_IMAGE"


class OutOfBounds(PlanningError):
    """Detection box exceeds the image extent; ``index`` is its list position."""

    code = "OUT_OF_BOUNDS"

    def __init__(self, index: int, message: str):
        super().__init__(message, detail={"index": index})
        self.index = index


class DuplicateScrew(PlanningError):
    """A screw already exists for this (vertebra, side)."""

    code = "DUPLICATE_SCREW"


class UnknownScrew(PlanningError):
    """Screw id not present in the session."""

    code = "UNKNOWN_SCREW"


class UnknownSession(PlanningError):
    """Session id not present in the store."""

    code = "UNKNOWN_SESSION"


class EmptyPlan(PlanningError):
    """Export requested with no screws placed."""

    code = "EMPTY_PLAN"


class CorruptSession(PlanningError):
    """Session stream failed to load: bad version, bad syntax, or broken invariants."""

    code = "CORRUPT_SESSION"


class DetectorFailed(PlanningError):
    """External detector exited nonzero, wrote malformed output, or is missing."""

    code = "DETECTOR_FAILED"


class ScriptError(PlanningError):
    """Plan script line failed to parse."""

    code = "SCRIPT_ERROR"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}", detail={"line_no": line_no})
        self.line_no = line_no
        self.reason = reason

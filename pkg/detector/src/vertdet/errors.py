class ShapeMismatch(ValueError):
    """Input tensor shapes violate a block's contract."""


class EmptyTruth(ValueError):
    """Evaluation requested against a dataset with no ground-truth boxes."""


class BoxFileError(ValueError):
    """Box file line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason

"""Exception hierarchy shared across the pipeline.

Exit-code mapping used by the CLI:
  2 -- input/parse errors
  3 -- insufficient data
  4 -- schema mismatch
"""


class GaitLabError(Exception):
    """Base class for all gaitlab errors."""


class ParseError(GaitLabError):
    """Base for input/parse failures (CLI exit code 2)."""


class MalformedLine(ParseError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        self.reason = reason
        msg = f"malformed keypoint line {line_no}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class DuplicateFrame(ParseError):
    def __init__(self, frame_index):
        self.frame_index = frame_index
        super().__init__(f"duplicate frame index {frame_index}")


class EmptyInput(ParseError):
    def __init__(self, source=""):
        self.source = source
        super().__init__(f"no frames parsed from input {source!r}")


class InsufficientDataError(GaitLabError):
    """Base for not-enough-data failures (CLI exit code 3)."""


class TooFewValidFrames(InsufficientDataError):
    def __init__(self, valid, required):
        self.valid = valid
        self.required = required
        super().__init__(f"only {valid} valid frames, need at least {required}")


class TooFewFrames(InsufficientDataError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"need at least 2 frames to aggregate, got {n}")


class InsufficientData(InsufficientDataError):
    def __init__(self, msg):
        super().__init__(msg)


class ClassTooSmall(InsufficientDataError):
    def __init__(self, label, n):
        self.label = label
        self.n = n
        super().__init__(f"class {label} has only {n} items, need at least 4")


class TooManyFolds(InsufficientDataError):
    def __init__(self, folds, smallest):
        self.folds = folds
        self.smallest = smallest
        super().__init__(
            f"{folds} folds requested but smallest class has {smallest} items"
        )


class DegenerateGeometry(GaitLabError):
    """Base for geometric degeneracies in a frame."""


class DegenerateLine(DegenerateGeometry):
    def __init__(self, what, frame_index=None):
        self.what = what
        self.frame_index = frame_index
        msg = f"degenerate line: coincident endpoints for {what}"
        if frame_index is not None:
            msg += f" (frame {frame_index})"
        super().__init__(msg)


class DegeneratePose(DegenerateGeometry):
    def __init__(self, frame_index=None):
        self.frame_index = frame_index
        msg = "degenerate pose: all keypoints coincide"
        if frame_index is not None:
            msg += f" (frame {frame_index})"
        super().__init__(msg)


class SchemaMismatch(GaitLabError):
    """Feature schema fingerprint disagreement (CLI exit code 4)."""

    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"schema fingerprint mismatch: expected {expected}, got {got}")

"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so every failure a pipeline
stage can produce should be raised as one of the classes below (plain
ValueError is reserved for bad arguments to library functions).
"""


class JumpsyncError(Exception):
    """Base class for all jumpsync failures."""


class ConfigError(JumpsyncError):
    """Invalid or incomplete pipeline configuration (exit code 2)."""


class EventNotFoundError(JumpsyncError):
    """No frame exceeded the detection threshold (exit code 3)."""


class GeometryError(JumpsyncError):
    """Degenerate or singular projective geometry (exit code 4)."""


class SequenceIOError(JumpsyncError):
    """Frame-sequence I/O failure: missing files, gaps, bad headers (exit code 5)."""

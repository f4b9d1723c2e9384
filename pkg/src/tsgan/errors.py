"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every diagnosed toolkit failure."""


class ShapeError(ToolkitError):
    """Operand shapes violate an operation's shape rule."""


class DomainError(ToolkitError):
    """Numeric input outside an operation's domain (log of a non-positive value, c <= 0, ...)."""


class GraphError(ToolkitError):
    """Misuse of a computation record: non-scalar loss, double backward, missing gradient."""


class DataError(ToolkitError):
    """Malformed or unusable input data."""


class ConfigError(ToolkitError):
    """Invalid, unknown, or inconsistent configuration."""


class NumericAbort(ToolkitError):
    """Training aborted on a non-finite loss or gradient."""

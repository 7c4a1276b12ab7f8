"""Exception hierarchy for the matvines package."""


class MatvinesError(Exception):
    """Base class for all package errors."""


class GraphInputError(MatvinesError, ValueError):
    """Malformed graph data: loops, missing labels, unknown endpoints, bad files."""


class PosetInputError(MatvinesError, ValueError):
    """Malformed poset data or out-of-range arguments to poset operations."""


class PreconditionError(MatvinesError, ValueError):
    """An operation was called on a structure outside its admissible class."""


class MorphismError(MatvinesError, ValueError):
    """A supplied map violates its homomorphism contract."""


class ResourceLimitError(MatvinesError, RuntimeError):
    """A computation exceeds the configured resource policy and was refused."""


class InternalDefectError(MatvinesError, RuntimeError):
    """A guaranteed property failed to hold; indicates a bug, not bad input."""

"""Exception hierarchy shared across the engine."""


class DiffcertError(Exception):
    """Base class for all engine errors."""


class ParseError(DiffcertError):
    """Malformed network / region / spec file."""


class ShapeError(DiffcertError):
    """Inconsistent matrix or vector dimensions."""


class DimensionError(DiffcertError):
    """Input vector length does not match the expected dimension."""


class AlignmentError(DiffcertError):
    """Prune spec inconsistent with the network shapes."""


class IntervalError(DiffcertError):
    """Interval endpoints out of order."""


class RelaxationError(DiffcertError):
    """Internal guard: a relaxation slope left its admissible range."""


class InfeasibleAtCenter(DiffcertError):
    """Radius search cannot start: the center itself violates epsilon."""

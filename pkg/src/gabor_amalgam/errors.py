"""Exception hierarchy; everything raised by this package derives from
GaborAmalgamError so callers can catch library failures in one clause."""


class GaborAmalgamError(Exception):
    """Base class for all library errors."""


class ConfigError(GaborAmalgamError):
    """Invalid run configuration or input file."""


class GridMismatch(GaborAmalgamError):
    """Operands live on different grids."""


class LatticeMismatch(GaborAmalgamError):
    """Coefficients indexed by a different lattice than expected."""


class IndexMismatch(GaborAmalgamError):
    """Atom set does not match the system it is used with."""


class NonCommensurateShift(GaborAmalgamError):
    """Time shift is not an integer multiple of the grid step."""


class NonCommensurateFrequency(GaborAmalgamError):
    """Frequency is not an integer multiple of 1/L."""


class NonIntegerPeriod(GaborAmalgamError):
    """Period does not admit the unit-cell tiling."""


class OutOfTable(GaborAmalgamError):
    """Tabulated weight queried off its support."""


class OutOfRange(GaborAmalgamError):
    """Argument outside the admissible range."""


class GridTooLarge(GaborAmalgamError):
    """Dense-matrix oracle requested for an oversized grid."""


class NotConverged(GaborAmalgamError):
    """Iterative procedure exceeded its budget."""


class SingularOperator(GaborAmalgamError):
    """Operator has no bounded inverse at the working tolerance."""


class NotAFrame(GaborAmalgamError):
    """Lower frame bound vanishes at the working tolerance."""

"""Exception hierarchy shared by all udrd modules."""


class UdrdError(Exception):
    """Base class for every error raised by this package."""


class InvalidMatrix(UdrdError):
    """Matrix input violates structural requirements (shape, symmetry, finiteness)."""


class DomainError(UdrdError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class SolverError(UdrdError):
    """A bracketed root search failed to converge."""


class AdmissibilityError(UdrdError):
    """Spectrum is not strictly positive on the evaluation grid."""


class DegenerateToeplitz(UdrdError):
    """Toeplitz truncation of the autocorrelation is numerically singular."""


class PrecisionError(UdrdError):
    """Numerical estimate did not stabilize under grid refinement."""

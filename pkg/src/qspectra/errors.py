"""Exception hierarchy shared by all qspectra modules.

Distinct classes are kept for the distinct failure contracts so that callers
(and the command line front end) can map them to exit codes without parsing
messages.
"""


class QSpectraError(Exception):
    """Base class for all qspectra errors."""


class DomainError(QSpectraError):
    """An input violates a documented precondition (bad set, bad point, bad spec)."""


class SingularityError(QSpectraError):
    """A requested evaluation point lies in or too close to a spectral set."""


class DivergenceError(QSpectraError):
    """A series or iteration is used outside its region of convergence."""


class NumericalError(QSpectraError):
    """A numerical kernel failed to converge or to meet its residual contract."""


class ConsistencyError(QSpectraError):
    """Computed data violates a structural identity it is guaranteed to satisfy."""


class ConditioningError(QSpectraError):
    """The problem is too ill conditioned for the requested tolerance."""


class UnsupportedError(QSpectraError):
    """The operation is not available for this object (e.g. no exact derivative)."""


class FunctionSpecError(QSpectraError):
    """A textual function specification could not be parsed."""

"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (malformed or
out-of-contract input) and :class:`NumericalFailure` (an algorithm could
not reach a trustworthy answer). The CLI maps them to exit codes 2 and 3.
"""


class DistVarError(Exception):
    """Base class for all package errors."""


class InputError(DistVarError, ValueError):
    """Raised when an argument violates a precondition."""


class NumericalFailure(DistVarError, ArithmeticError):
    """Raised when a computation cannot be completed reliably."""


class NonSquare(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotCommuting(InputError):
    pass


class NotUnitary(InputError):
    pass


class EmptyRange(InputError):
    """The projection of a model triple is zero."""


class NonConvergence(NumericalFailure):
    pass


class RetriesExhausted(NumericalFailure):
    pass


class SingularResolvent(NumericalFailure):
    pass


class DeflationAmbiguous(NumericalFailure):
    """A root-order residual fell between ``tol`` and ``100 * tol``."""


class RankDeficiencyUnstable(NumericalFailure):
    pass


class DefectMismatch(NumericalFailure):
    pass

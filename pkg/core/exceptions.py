"""
Error hierarchy shared by all zetalab apps.

Each error carries the process exit code used by the zetalab command:
2 for bad input, 3 for numerical failure, 4 for an exhausted budget.
"""


class ZetaLabError(Exception):
    """Base class for all zetalab errors"""

    exit_code = 1

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.__class__.__name__)
        self.context = context

    def to_dict(self) -> dict:
        return {
            "error": self.__class__.__name__,
            "message": str(self),
            "context": {k: repr(v) for k, v in self.context.items()},
        }


class InputError(ZetaLabError):
    exit_code = 2


class NumericalError(ZetaLabError):
    exit_code = 3


class BudgetError(ZetaLabError):
    exit_code = 4


# Input errors
class ParseError(InputError):
    def __init__(self, message: str, position: int = None, **context):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message, position=position, **context)
        self.position = position


class DegreeCapExceeded(InputError):
    pass


class UnknownEntry(InputError):
    pass


class ParamOutOfRange(InputError):
    pass


class InvalidRadii(InputError):
    pass


class HypothesisViolation(InputError):
    pass


class ZeroAlpha(InputError):
    pass


class ZeroLeadingJet(InputError):
    pass


class DegenerateAtAlpha(InputError):
    pass


class GrowthViolation(InputError):
    pass


# Numerical errors
class BoundaryZero(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class ClusterUnresolved(NumericalError):
    pass


class PoleInDisk(NumericalError):
    pass


class PoleHit(NumericalError):
    pass


class PoleAtOne(PoleHit):
    pass


class NearZeroOfZeta(NumericalError):
    pass


class NoNonzeroRoot(NumericalError):
    pass


class TargetVanishesOnCircle(NumericalError):
    pass


class IncompleteZeroSet(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


# Budget errors
class BudgetExceeded(BudgetError):
    pass


class TermBudgetExceeded(BudgetError):
    pass

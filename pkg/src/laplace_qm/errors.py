"""Exception hierarchy shared by all modules."""


class LaplaceQMError(Exception):
    """Base class for every error raised by this package."""


class PoleEvaluation(LaplaceQMError, ZeroDivisionError):
    pass


class BranchDomain(LaplaceQMError, ValueError):
    pass


class NotExpandable(LaplaceQMError, ValueError):
    pass


class UnsupportedInput(LaplaceQMError, ValueError):
    pass


class NotInvertible(LaplaceQMError, ValueError):
    pass


class ContourThroughPole(LaplaceQMError, ValueError):
    pass


class DivergentMoment(LaplaceQMError, ValueError):
    pass


class DomainError(LaplaceQMError, ValueError):
    pass


class NoBoundStates(LaplaceQMError):
    pass


class InvalidQuantumNumber(LaplaceQMError, ValueError):
    pass


class UnsupportedExcitation(LaplaceQMError, NotImplementedError):
    pass


class BudgetExceeded(LaplaceQMError, RuntimeError):
    pass

"""Exception hierarchy shared by every module."""


class WeilcertError(Exception):
    """Base class for all library errors."""


class NonPrime(WeilcertError, ValueError):
    pass


class BudgetExceeded(WeilcertError):
    """A configured enumeration or table budget would be exceeded.

    The message always names the budget that was hit.
    """

    def __init__(self, budget, needed, limit):
        self.budget = budget
        self.needed = needed
        self.limit = limit
        super().__init__(f"budget {budget!r} exceeded: need {needed}, limit {limit}")


class BothZero(WeilcertError, ValueError):
    pass


class BadConstantTerm(WeilcertError, ValueError):
    pass


class NotNodal(WeilcertError):
    pass


class InfiniteSingularLocus(WeilcertError):
    """The curve has infinitely many singular points (a repeated component)."""


class NotSmooth(WeilcertError):
    pass


class Inconsistent(WeilcertError):
    pass


class DescentFailed(WeilcertError):
    pass


class NoSolution(WeilcertError):
    pass


class Ambiguous(WeilcertError):
    pass


class GapTooWide(WeilcertError):
    pass


class NoSmoothSection(WeilcertError):
    pass


class PencilInvalid(WeilcertError):
    pass


class InconsistentBetti(WeilcertError):
    pass


class EmptyInterval(WeilcertError, AssertionError):
    pass

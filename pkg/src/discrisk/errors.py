"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(ArithmeticError):
    """An iterative algorithm ran out of iterations before converging."""


class IntegerCutError(DomainError):
    """A truncation endpoint landed on (or within 1e-9 of) an integer.

    The window endpoints must be continuity points of the count CDF, so
    they may never be integers.  Pick an irrational ``k`` such as pi.
    """


class DegenerateSampleError(DomainError):
    """The sample has zero spread, so no truncation window can be built."""


class DesignError(DomainError):
    """The truncation window holds fewer than two support points or no mass."""

"""Exception types shared across the library.

Validation failures name the violated invariant; numerical failures carry
enough context to tell what the engine was doing when it gave up.
"""


class DistributionError(ValueError):
    """A distribution description violates one of its invariants."""


class NegativeProbability(DistributionError):
    """A probability entry is negative, or a mixture weight is not positive."""


class SumNotOne(DistributionError):
    """A probability or weight vector does not sum to one within tolerance."""


class DimensionMismatch(DistributionError):
    """Distributions that must share an outcome count K do not."""


class EmptyEnsemble(DistributionError):
    """An ensemble was given no members."""


class InvalidSpec(DistributionError):
    """A raw distribution description is malformed (unknown kind, missing or
    out-of-range field, excessive mixture nesting, ...)."""


class IntegrationFailure(ArithmeticError):
    """The requested tolerance could not be reached within the evaluation budget."""


class ConsistencyFailure(ArithmeticError):
    """Two independent evaluation routes disagree beyond their error bounds."""

"""Exception hierarchy for the representation pipeline."""


class HyperdetError(Exception):
    """Base class for all pipeline errors."""


class PolynomialParseError(HyperdetError, ValueError):
    """Raised on malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonHomogeneousError(PolynomialParseError):
    pass


class DegreeError(HyperdetError, ValueError):
    pass


class InputError(HyperdetError, ValueError):
    """Input violates a precondition (e.g. f(e) <= 0, non-real f)."""


class TransversalityFailure(HyperdetError):
    """V(f) and V(g) do not meet in d(d-1) distinct, simple, non-real points."""


class PairingFailure(HyperdetError):
    pass


class DimensionError(HyperdetError):
    pass


class NotInSpan(HyperdetError):
    pass


class RankDeficient(HyperdetError):
    pass


class LargeResidual(HyperdetError):
    pass


class NonPositiveScale(HyperdetError):
    pass


class NotHyperbolic(HyperdetError):
    pass


class IndefiniteOutput(HyperdetError):
    pass


class IllConditionedFit(HyperdetError):
    pass


class NotHermitian(HyperdetError, ValueError):
    pass

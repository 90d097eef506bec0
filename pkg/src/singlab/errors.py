"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 3 for a failed
hypothesis about the germ, 4 for unsupported or malformed input.
"""


class SinglabError(Exception):
    exit_code = 4


class HypothesisError(SinglabError):
    """The germ does not satisfy a precondition of the requested check."""

    exit_code = 3


class UnsupportedError(SinglabError):
    """Input outside the supported classes, or a computation that cannot be certified."""

    exit_code = 4


class PolySyntaxError(SinglabError, SyntaxError):
    def __init__(self, message, text="", position=0):
        self.position = position
        self.source = text
        caret = f"\n  {text}\n  {' ' * position}^" if text else ""
        super().__init__(f"{message} at position {position}{caret}")


class UnknownVariable(SinglabError):
    pass


class ExtensionTooDeep(UnsupportedError):
    pass


class SaturationDiverged(UnsupportedError):
    pass


class OriginNotInVariety(HypothesisError):
    pass


class NotACurve(HypothesisError):
    pass


class NonIsolatedIntersection(HypothesisError):
    pass


class SquarefreeRequired(HypothesisError):
    pass


class LiftingFailed(UnsupportedError):
    pass


class GenericityUnstable(UnsupportedError):
    pass


class TruncationTooShort(UnsupportedError):
    pass


class RestrictionVanishes(HypothesisError):
    pass


class SliceNotTransverse(HypothesisError):
    pass


class NotICIS(HypothesisError):
    pass


class NonIsolated(HypothesisError):
    pass


class TransversalNotIsolated(HypothesisError):
    pass


class PolarNotCurve(HypothesisError):
    pass


class UnsupportedWeight(UnsupportedError):
    pass


class MissingStratumChi(UnsupportedError):
    pass


class ScenarioInvalid(UnsupportedError):
    pass


class HintRejected(UnsupportedError):
    """A user-supplied branch parametrization failed verification."""


class HypothesisFailed(HypothesisError):
    pass

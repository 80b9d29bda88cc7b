"""Exception types shared across the package."""


class MultcritError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MultcritError, ValueError):
    """An argument lies outside the supported domain."""


class JetOverflowError(MultcritError, OverflowError):
    """Orbit iteration produced a non-finite value.

    ``step`` is the first iteration index at which a non-finite entry
    appeared (0-based, counting applications of z -> z^2 + c).
    """

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite value at iteration step {step}")


class ParabolicChartError(MultcritError):
    """The multiplier is too close to 1 for the c-chart to exist."""


class IncompleteRootsError(MultcritError):
    """Fewer than 2^n distinct periodic roots were found for this c."""


class InconsistentRootError(MultcritError):
    """A supposed root of the period equation fails every divisor test."""


class OrbitGroupingError(MultcritError):
    """Forward iteration of a root failed to match any other root."""


class NonGenericParameterError(MultcritError):
    """The sampled c yields a degenerate orbit structure; resample."""


class SolveFailed(MultcritError):
    """Newton iteration on the critical-point system did not produce a solution.

    ``reason`` is one of ``"no-converge"``, ``"singular-jacobian"``,
    ``"divergence"``.
    """

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or reason)


class VerificationRejected(MultcritError):
    """A converged state does not qualify as a period-n critical point.

    ``reason`` is one of ``"wrong-period"``, ``"parabolic"``,
    ``"residual-too-large"``.
    """

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or reason)


class BoundOverflowError(MultcritError):
    """An insert would push a result set past its counting bound.

    This signals a dedup or tolerance defect, never a legitimate outcome.
    """


class DocumentFormatError(MultcritError, ValueError):
    """A result document failed to parse or is missing required fields."""

"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: precondition failures
(bad descriptors, cross-ring mixing, non-symmetric input, ...) exit 2,
budget overruns exit 3, verification failures / counterexamples exit 4.
"""


class ApxError(Exception):
    """Base class for all package errors."""


class RingConstructionError(ApxError):
    """Invalid ring descriptor; the message names the violated axiom."""


class ParseError(ApxError):
    """Malformed ring DSL, element or set literal."""

    def __init__(self, message, text=None, position=None):
        if text is not None and position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)
        self.text = text
        self.position = position


class CrossRingError(ApxError):
    """Operands belong to different rings."""


class InfiniteRingError(ApxError):
    """Operation requires a finite ring (enumeration, quotients, ...)."""


class NotAnIdealError(ApxError):
    """Candidate set fails an ideal axiom; carries a violating pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSymmetricError(ApxError):
    """Input set is not additively symmetric (X != -X)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UncoverableError(ApxError):
    """Some target element lies in no translate offered by the pool."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class BudgetExceededError(ApxError):
    """A derived set outgrew its cardinality cap; carries partial data."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationFailedError(ApxError):
    """A witness or certificate failed re-verification.

    For constructive covers this indicates an implementation bug and is
    surfaced, never silently corrected.
    """


class ZeroDivisorError(ApxError):
    """Ambient ring has zero divisors; carries the witnessing pair."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InvalidParamsError(ApxError):
    """Bad parameters for a gallery item or sweep family."""

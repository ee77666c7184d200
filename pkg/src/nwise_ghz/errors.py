"""Exception hierarchy shared by every module of the package."""


class GhzChainError(Exception):
    """Base class for all errors raised by nwise_ghz."""


class ValidationError(GhzChainError, ValueError):
    """Input rejected before any numerics ran."""


class InvalidSpec(ValidationError):
    pass


class InvalidWindow(ValidationError):
    pass


class OutOfWindow(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class TargetOutOfRange(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class UnreachableTarget(ValidationError):
    pass


class ConfigError(ValidationError):
    """A run/sweep configuration document is malformed.

    ``field`` names the offending entry so the CLI can report it.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NoConvergence(GhzChainError, ArithmeticError):
    """The step-halving refinement did not settle within the allowed steps."""

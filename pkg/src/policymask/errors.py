"""Exception types shared across the package."""


class PolicymaskError(Exception):
    pass


class ConfigError(PolicymaskError):
    """Invalid configuration: unknown map, missing decoder, bad field value."""


class InputError(PolicymaskError, ValueError):
    """Caller passed data violating an operation precondition."""


class StateError(PolicymaskError):
    """Operation called in a state that forbids it (e.g. step after done)."""


class TrainingError(PolicymaskError):
    """Training diverged or produced non-finite quantities."""


class NumericalError(PolicymaskError):
    """Non-finite activations or values where finite ones are required."""


class UndefinedMetricError(PolicymaskError):
    """Metric undefined for this input (empty class, zero variance)."""

    def __init__(self, message, what=None):
        super().__init__(message)
        self.what = what


class FormatError(PolicymaskError):
    """Malformed serialized container."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class VersionError(FormatError):
    """Serialized container has an unsupported version."""

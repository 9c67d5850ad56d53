"""Exception types raised across the package."""


class FieldMismatchError(ValueError):
    """Operands belong to different fields (or incompatible characteristics)."""


class InconsistentSystemError(ValueError):
    """A linear system has no solution."""


class AmbiguousSolutionError(ValueError):
    """A linear system has more than one solution."""


class InvalidAlphaError(ValueError):
    """Reed-Solomon evaluation points are not pairwise distinct."""


class NoSystematicFormError(ValueError):
    """A code or parity check cannot be normalised without permuting columns."""


class EnumerationLimitError(ValueError):
    """An exhaustive enumeration would exceed the configured guard."""

    def __init__(self, size, limit, what="enumeration"):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} of size {size} exceeds guard limit {limit}")


class ConfigurationError(ValueError):
    """Scheme parameters violate a hypothesis of the construction."""


class InfeasibleConfigurationError(ConfigurationError):
    """Parameters are well formed but admit no working scheme (e.g. zero download slots)."""


class CorruptedResponseError(ValueError):
    """Server responses are inconsistent with the response code."""

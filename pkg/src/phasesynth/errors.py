"""Exception hierarchy. Everything derives from ValueError so callers that
only care about bad input can catch that."""


class PhaseSynthError(ValueError):
    pass


class ConfigError(PhaseSynthError):
    """Invalid configuration value (epsilon, resource, mode, ...)."""


class DimensionError(PhaseSynthError):
    """Sizes that do not agree, or are not powers of two."""


class ResourceCapError(PhaseSynthError):
    """Requested image exceeds the desk-scale statevector cap."""


class MalformedStateError(PhaseSynthError):
    """State vector lacks the structure an operation requires."""


class DegenerateDistributionError(PhaseSynthError):
    """Circular statistics are undefined (resultant length ~ 0, constant input...)."""

"""Exception types shared across the package."""


class CavityTangleError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(CavityTangleError):
    """A constructor or operation received an invalid parameter."""


class StateError(CavityTangleError):
    """A state or operator argument violates its contract (norm, Hermiticity,
    sector membership, positivity)."""


class ResourceError(CavityTangleError):
    """A request would exceed the configured memory policy."""


class NoFeatureError(CavityTangleError):
    """A feature-detection routine found nothing to report (e.g. a constant
    purity grid has no critical region)."""

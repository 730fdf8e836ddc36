"""Exception types shared across the toolkit."""


class CovertSimError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(CovertSimError, ValueError):
    """A scenario or simulation parameter fails validation."""


class DomainError(CovertSimError, ValueError):
    """An argument lies outside the validity domain of a closed form."""


class InfeasibleCover(CovertSimError):
    """The covert constraint cannot be met with the available users."""


class NoSolution(CovertSimError):
    """A numerical inversion target is unreachable."""

"""Exception hierarchy shared by all modules."""


class WiretapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(WiretapError, ValueError):
    """An argument lies outside the domain of the function."""


class ConfigError(WiretapError, ValueError):
    """Invalid or inconsistent configuration (bad parameter sets, unknown keys)."""


class ShapeError(WiretapError, ValueError):
    """Mismatched mode counts or operator shapes."""


class NumericalError(WiretapError, ArithmeticError):
    """A matrix that must be positive semidefinite has a clearly negative eigenvalue."""


class ResourceError(WiretapError, MemoryError):
    """A computation would exceed a configured size cap."""


class UnsupportedConfigurationError(WiretapError, ValueError):
    """The request is well formed but deliberately not supported."""


class DegenerateInputError(WiretapError, ValueError):
    """The input admits no valid object (e.g. an empty typical set)."""


class PropertyViolation(WiretapError, AssertionError):
    """A property that must hold by theory failed numerically."""

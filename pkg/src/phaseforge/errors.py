"""Exception types shared across the package."""


class PhaseforgeError(Exception):
    """Base class for errors raised by this package."""


class ConstructionError(PhaseforgeError, ValueError):
    """A builder was given parameters outside its supported range."""


class ConsistencyError(PhaseforgeError, RuntimeError):
    """An internal invariant failed; indicates a bug in a constructor."""


class CapacityError(PhaseforgeError, RuntimeError):
    """A computation would exceed a configured size or budget cap."""


class StrategyDomainError(PhaseforgeError, ValueError):
    """A defect strategy was applied outside its domain of definition."""


class AdmissibilityError(PhaseforgeError, ValueError):
    """Phase extraction was attempted on an inadmissible datum."""


class ConfigError(PhaseforgeError, ValueError):
    """A scenario configuration could not be parsed."""

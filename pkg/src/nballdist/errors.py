"""Exception types shared across the package."""


class NonConvergenceError(RuntimeError):
    """An iterative evaluation failed to meet its tolerance within its cap."""


class StreamDefectError(RuntimeError):
    """A uniform-variate stream behaved so badly that sampling gave up."""


class StreamExhaustedError(RuntimeError):
    """An external variate stream ran out of words."""


class DegenerateDensityError(ValueError):
    """A density vanishes (almost) everywhere, so no distribution exists."""


class DivergentIntegralError(ValueError):
    """A pairwise expectation diverges at the lower integration limit."""


class ConfigurationError(ValueError):
    """Invalid run configuration (bad flag value, missing bound, ...)."""

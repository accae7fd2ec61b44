class PrymError(ValueError):
    """Base class for errors raised by this package."""


class GraphError(PrymError):
    pass


class MorphismError(PrymError):
    pass


class ParameterError(PrymError):
    """Raised when construction parameters fall outside their admissible range."""

class ValidationError(ValueError):
    """Input violates a construction invariant (bad probability, bad knots, ...)."""


class NumericalError(ArithmeticError):
    """A computation could not be carried out to the requested accuracy."""


class PartitionTooCoarse(ValidationError):
    """Some partition cell carries mass >= 1, so its odds are undefined."""

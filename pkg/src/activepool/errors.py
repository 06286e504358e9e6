"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration value violates its contract."""


class ShapeError(ValueError):
    """Array dimensions are inconsistent with the model or pool."""


class NumericError(RuntimeError):
    """A computation produced non-finite values."""


class CapacityError(ValueError):
    """A selection asks for more examples than are available."""


class DataError(ValueError):
    """A dataset file or label set is malformed."""

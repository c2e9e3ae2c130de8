class ConfigError(ValueError):
    """Bad configuration: unknown keys, ids, or inconsistent shapes."""


class NumericError(FloatingPointError):
    """Non-finite values encountered where finite math was required."""

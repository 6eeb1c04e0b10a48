"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Input vector or matrix does not match the problem dimension."""


class ConfigError(ValueError):
    """Invalid algorithm, problem, or experiment configuration."""

"""Exception types shared across the library and the CLI.

The CLI maps these onto exit codes: ``ConfigError`` -> 1, ``NumericalError`` -> 2.
"""


class ConfigError(ValueError):
    """Invalid configuration: bad parameter values, malformed config files."""


class NumericalError(RuntimeError):
    """A numerical procedure failed: integration breakdown, lost root bracket,
    or a horizon reached without extinction."""

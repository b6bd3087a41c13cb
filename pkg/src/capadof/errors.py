"""Exception types shared across the package.

The CLI maps these onto process exit codes; library callers catch them
like ordinary exceptions.
"""


class DomainError(ValueError):
    """An input violates an operation's stated preconditions."""


class ConfigError(ValueError):
    """A scenario/sweep configuration file is malformed or inconsistent."""


class NumericalError(RuntimeError):
    """A numerical routine (e.g. the SVD) failed to produce a result."""

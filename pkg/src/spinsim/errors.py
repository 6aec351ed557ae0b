"""Exception taxonomy shared across the package.

The CLI maps these onto distinct exit codes, so modules should raise the
most specific class that applies.  Plain ``ValueError`` is used for bad
arguments; it is treated as a configuration problem at the CLI boundary.
"""


class ConfigError(ValueError):
    """A run configuration is malformed or violates a precondition."""


class CapabilityError(RuntimeError):
    """The request exceeds a resource or feature cap (e.g. oracle size)."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to converge.

    Carries the best result found so far in ``best`` when available.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best

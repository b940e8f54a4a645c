"""Exception types shared across the package.

Two failure families matter to callers: a mathematical hypothesis that the
input fails to satisfy (the computation would be meaningless), and a resource
budget that ran out (the computation would be correct but was aborted).  The
CLI maps these to distinct exit codes.
"""


class HypothesisError(Exception):
    """An input violates a mathematical hypothesis required by the routine."""


class ResourceBudgetError(Exception):
    """A configured enumeration / reduction / search budget was exceeded."""


class PrimeSearchError(HypothesisError):
    """No qualifying prime tuple exists in the sieving windows.

    Carries per-condition failure counts so callers can see whether size,
    coprimality or the variety profile was the blocker.
    """

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = dict(failures or {})

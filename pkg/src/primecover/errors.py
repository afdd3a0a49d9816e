"""Exception types shared across the package."""


class PrimeCoverError(Exception):
    """Base class for all package errors."""


class ParseError(PrimeCoverError, ValueError):
    """Malformed term, function file, PLA file or cost table."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(PrimeCoverError):
    """A configured size cap was exceeded."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class OracleLimitError(ResourceLimitError):
    """A brute-force oracle was asked for more than its hard cap."""


class BudgetExceeded(ResourceLimitError):
    """Branch-and-bound ran out of nodes.

    Carries the best feasible cover found so far and a lower bound on the
    optimum so callers can report a best-effort answer.
    """

    def __init__(self, message, cap, best, best_cost, lower_bound):
        super().__init__(message, cap)
        self.best = best
        self.best_cost = best_cost
        self.lower_bound = lower_bound


class ConfigurationError(PrimeCoverError):
    """Inconsistent user configuration, e.g. a cost table miss."""

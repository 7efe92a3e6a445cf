"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad vertex ids, duplicate edges, ...)."""


class InfeasibleError(Exception):
    """The requested connectivity cannot be reached in the available graph.

    ``witness`` is a terminal pair (or a single terminal for rooted
    requests) whose connectivity falls short, and ``achieved`` is the best
    value the full graph supports for it.
    """

    def __init__(self, message, witness=None, achieved=None):
        super().__init__(message)
        self.witness = witness
        self.achieved = achieved


class StateError(Exception):
    """An operation was called on a graph that violates its precondition."""


class SizeLimitError(Exception):
    """A brute-force routine was asked to handle an instance above its bound."""


class GuardViolation(AssertionError):
    """A structural guarantee that must hold at runtime was found broken."""

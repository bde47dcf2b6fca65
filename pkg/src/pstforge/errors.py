"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class NoSolutionError(RuntimeError):
    """Raised when a constrained design problem has no admissible solution."""


class BrokenNetworkError(NoSolutionError):
    """Degenerate spectrum: the only solutions decouple the source from the target."""

"""Exception types raised across the package."""


class DomcoverError(Exception):
    """Base class for all package errors."""


class ParseError(DomcoverError, ValueError):
    """Malformed graph or instance file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(DomcoverError, ValueError):
    """The requested solution kind does not exist for this input (e.g. an
    isolated vertex under total domination)."""

    def __init__(self, message, vertices=()):
        self.vertices = tuple(vertices)
        super().__init__(message)


class OracleLimitError(DomcoverError):
    """Instance is larger than an exact solver is willing to handle."""


class PreconditionError(DomcoverError, ValueError):
    """An input violates a documented precondition."""


class InvariantError(DomcoverError, RuntimeError):
    """Internal invariant violated; indicates a malformed state object."""

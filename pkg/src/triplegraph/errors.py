"""Exception hierarchy shared by every module."""


class TripleGraphError(Exception):
    """Base class for all errors raised by this package."""


class TripleConstraintError(TripleGraphError, ValueError):
    """A statement violates the (U|B) x U x (U|B|L) shape of a triple."""


class NTriplesSyntaxError(TripleGraphError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(TripleGraphError, RuntimeError):
    """Derivation produced more statements than the configured cap."""


class GraphStructureError(TripleGraphError, ValueError):
    """The graph lacks a structural property an algorithm requires."""


class NotStronglyConnectedError(GraphStructureError):
    def __init__(self, source, target):
        self.source = source
        self.target = target
        super().__init__(f"graph is not strongly connected: no path from {source} to {target}")


class ConvergenceError(TripleGraphError, RuntimeError):
    pass


class DegenerateError(TripleGraphError, ValueError):
    """A quantity is undefined for the given input (zero variance, x -> x, ...)."""


class ShapeError(TripleGraphError, ValueError):
    """Premises do not share a term in the positions a rule requires."""


class ExpressionSyntaxError(TripleGraphError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ExpressionTypeError(TripleGraphError, TypeError):
    pass


class MissingSliceError(TripleGraphError, KeyError):
    pass


class GrammarError(TripleGraphError, ValueError):
    pass

"""Exception hierarchy shared by the package."""


class ReebcobError(Exception):
    """Base class for all package errors."""


class SymbolError(ReebcobError, ValueError):
    pass


class RewriteLoopError(SymbolError):
    """Raised when rule application exceeds its step bound."""


class GraphError(ReebcobError, ValueError):
    pass


class ValidationError(GraphError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class ConstructionError(ReebcobError):
    """A product construction could not satisfy its precondition."""


class ParseError(ReebcobError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)

"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class GraphPDEError(Exception):
    code = "E_GENERIC"


class GraphFormatError(GraphPDEError, ValueError):
    """Malformed or invalid graph input (file content or constructor arguments)."""

    code = "E_GRAPH"

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class PartitionError(GraphPDEError, ValueError):
    code = "E_PARTITION"


class SignalError(GraphPDEError, ValueError):
    code = "E_SIGNAL"


class PreconditionError(GraphPDEError, ValueError):
    """A solver was called on data that violates its preconditions."""

    code = "E_PRECONDITION"


class ConvergenceError(GraphPDEError, RuntimeError):
    code = "E_CONVERGENCE"


class PoleError(GraphPDEError, ValueError):
    """``omega * length`` is a multiple of pi on some edge."""

    code = "E_POLE"

    def __init__(self, message, edge=None):
        self.edge = edge
        super().__init__(message)


class UsageError(GraphPDEError, ValueError):
    """Bad command-line arguments or configuration."""

    code = "E_USAGE"

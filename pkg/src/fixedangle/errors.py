"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`FixedAngleError`; the CLI maps the subclasses onto exit codes.
"""

from __future__ import annotations


class FixedAngleError(Exception):
    """Base class."""


class DataError(FixedAngleError, ValueError):
    """Malformed input data (graph files, angle registries, arguments)."""


class Graph6Error(DataError):
    def __init__(self, message: str, offset: int | None = None, line: int | None = None):
        self.offset = offset
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ParityError(DataError):
    pass


class RetryExhaustedError(FixedAngleError, RuntimeError):
    pass


class NotFoundError(FixedAngleError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class NotAvailableError(NotFoundError):
    pass


class CapacityError(FixedAngleError, MemoryError):
    pass


class ConsistencyError(FixedAngleError, ArithmeticError):
    pass


class DivergenceError(FixedAngleError, ArithmeticError):
    def __init__(self, message: str, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ValidationError(DataError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class RejectedGraphError(DataError):
    def __init__(self, message: str, graph_id: str | None = None):
        self.graph_id = graph_id
        super().__init__(message)

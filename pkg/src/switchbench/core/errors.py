"""
Exception hierarchy shared by the whole package.

Library code raises these; only the command line maps them to exit codes.
"""


class SwitchbenchError(Exception):
    pass


# --- structure / validation ---

class StructureError(SwitchbenchError):
    """A switched system or pattern breaks one of its structural invariants."""


class DimensionMismatch(StructureError):
    def __init__(self, message: str, subsystem: int | None = None, matrix: str | None = None,
                 expected: tuple[int, int] | None = None, actual: tuple[int, int] | None = None) -> None:
        super().__init__(message)
        self.subsystem = subsystem
        self.matrix = matrix
        self.expected = expected
        self.actual = actual


class DuplicateParameter(StructureError):
    def __init__(self, name: str, first, second) -> None:
        super().__init__(
            f"Parameter '{name}' is used more than once ({first} and {second}); "
            "parameters must be independent"
        )
        self.name = name
        self.first = first
        self.second = second


class EmptySystem(StructureError):
    pass


class PatternOutOfBounds(StructureError):
    pass


class IndexOutOfRange(SwitchbenchError, IndexError):
    pass


# --- matching ---

class MatchingError(SwitchbenchError):
    pass


class InvalidMatching(MatchingError):
    """The supplied pairs are not a matching of the graph."""


class NotMaximum(MatchingError):
    """An augmenting path exists for the supplied matching."""

    def __init__(self, path) -> None:
        super().__init__(f"Matching is not maximum, augmenting path: {path}")
        self.path = path


# --- limits ---

class TooLarge(SwitchbenchError):
    def __init__(self, what: str, size: int, limit: int) -> None:
        super().__init__(f"{what}: size {size} exceeds the exhaustive-search limit {limit}")
        self.size = size
        self.limit = limit


class BudgetExceeded(SwitchbenchError):
    def __init__(self, columns: int, budget: int) -> None:
        super().__init__(
            f"Controllability matrix would have {columns} columns, budget is {budget}; "
            "use the controllable subspace iteration instead"
        )
        self.columns = columns
        self.budget = budget


# --- input documents ---

class ParseError(SwitchbenchError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: str | None = None) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path:
            where.append(f"at {path}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.column = column
        self.path = path

"""
Domain errors raised by the toolkit.

Every error derives from ``ValueError`` so that callers which only know about
validation failures (the HTTP layer maps them to 400) keep working.
"""
from typing import Optional


class ToolkitError(ValueError):
    """Base class for data errors (CLI exit code 2, HTTP 400)."""


class EmptyLabelingError(ToolkitError):
    def __init__(self) -> None:
        super().__init__("empty labeling")


class LabelingMismatchError(ToolkitError):
    def __init__(self, n_f: int, n_g: int) -> None:
        super().__init__(f"labelings differ in n ({n_f} != {n_g})")
        self.n_f = n_f
        self.n_g = n_g


class TooFewObjectsError(ToolkitError):
    def __init__(self, n: int) -> None:
        super().__init__(f"need at least two objects (got {n})")


class OmegaInfeasibleError(ToolkitError):
    def __init__(self, n: int, rows: int, cols: int) -> None:
        super().__init__(f"exact Omega infeasible for n={n}, {rows}x{cols} marginals")


class NumericOverflowError(ToolkitError):
    def __init__(self, where: str) -> None:
        super().__init__(f"numeric overflow in {where}")


class InvalidParameterError(ToolkitError):
    """A generator, grid or algorithm parameter is out of its valid range."""


class ParseError(ToolkitError):
    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class DisconnectedGraphError(ToolkitError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"{detail}; restrict the graph to its largest connected component (--largest-component)")
        self.detail = detail


class EigensolverError(ToolkitError):
    pass


class SchemaError(ToolkitError):
    """A CSV file does not follow the experiment,param,measure,mean,std,runs schema."""

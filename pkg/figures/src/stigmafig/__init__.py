"""Figure rendering for stigmasim CSV outputs."""

from .io import EmptyDataError, SchemaError, load_rows

__all__ = ["EmptyDataError", "SchemaError", "load_rows"]

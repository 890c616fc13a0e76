"""CSV loading with schema checks.

Each figure declares the columns it needs; a file that does not carry them
fails with a diagnostic naming both the missing and the available columns
rather than a KeyError deep inside matplotlib.
"""

from __future__ import annotations

import csv
from typing import Optional


class SchemaError(Exception):
    """Input CSV does not match the expected column layout."""


class EmptyDataError(Exception):
    """Input parsed fine but holds nothing plottable."""


def load_rows(path, required: tuple) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyDataError(f"{path}: file is empty")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise SchemaError(
                f"{path}: missing columns {missing}; "
                f"found {list(reader.fieldnames)}")
        rows = list(reader)
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    return rows


def as_float(value: str) -> Optional[float]:
    """CSV cell to float; empty strings are nulls."""
    return float(value) if value != "" else None


def column(rows: list[dict], name: str) -> list[Optional[float]]:
    return [as_float(r[name]) for r in rows]

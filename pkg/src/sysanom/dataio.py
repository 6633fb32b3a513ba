"""CSV ingestion and the stationarity transforms applied before index analysis."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySample,
    LengthMismatch,
    NonFiniteValue,
    ParseError,
    TooFewPoints,
    ZeroBase,
)
from .indices import IndexCurve, PairedSample

__all__ = [
    "CURVE_HEADER",
    "Series",
    "percentage_returns",
    "lag_difference",
    "read_pairs_csv",
    "write_curve_csv",
    "read_curve_csv",
    "series_to_json",
    "series_from_json",
]

CURVE_HEADER = ("n", "I_n", "B_np")


@dataclass(frozen=True, eq=False)
class Series:
    """Named sequence of finite reals in time order."""

    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if values.size == 0:
            raise EmptySample("series has no values")
        if not np.isfinite(values).all():
            raise NonFiniteValue("series values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "name", str(self.name))

    def __len__(self) -> int:
        return int(self.values.size)


def percentage_returns(series: Series) -> Series:
    """Step-to-step percentage change ``100 * (v_t - v_{t-1}) / v_{t-1}``.

    The result is one shorter than the input and invariant under positive
    rescaling of the input.
    """
    if len(series) < 2:
        raise TooFewPoints("percentage returns need at least 2 values")
    if np.any(series.values == 0.0):
        raise ZeroBase(f"series {series.name!r} contains zero values")
    v = series.values
    name = f"{series.name}_returns" if series.name else "returns"
    return Series(100.0 * (v[1:] - v[:-1]) / v[:-1], name=name)


def lag_difference(series: Series, lag: int = 1) -> Series:
    """Difference at ``lag``: ``v_t - v_{t-lag}``; the result is ``lag`` shorter."""
    lag = int(lag)
    if lag < 1:
        raise ValueError(f"lag must be at least 1, got {lag}")
    if len(series) <= lag:
        raise TooFewPoints(f"series has {len(series)} values, need more than lag={lag}")
    v = series.values
    name = f"{series.name}_diff{lag}" if series.name else f"diff{lag}"
    return Series(v[lag:] - v[:-lag], name=name)


def _resolve_column(col, header: list[str] | None, path: str):
    if isinstance(col, int):
        return col
    text = str(col)
    if text.lstrip("+-").isdigit():
        return int(text)
    if header is None:
        raise ValueError(f"column {col!r} is a name but the file was read without a header")
    try:
        return header.index(text)
    except ValueError:
        raise ParseError(f"{path}: no column named {col!r} in header {header}", row=1, column=col) from None


def read_pairs_csv(path, x_column=0, y_column=1, has_header: bool = False) -> PairedSample:
    """Read aligned (x, y) pairs from a comma-separated file, in row (time) order.

    Columns are zero-based indices, or header names when ``has_header`` is
    set.  Every referenced cell must parse as a finite real; the first
    offending cell is reported with its 1-based file row.  Blank lines are
    skipped.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = None
    start = 0
    if has_header:
        if not rows:
            raise EmptySample(f"{path}: empty file")
        header = [cell.strip() for cell in rows[0]]
        start = 1
    xi = _resolve_column(x_column, header, str(path))
    yi = _resolve_column(y_column, header, str(path))
    xs: list[float] = []
    ys: list[float] = []
    for file_row, row in enumerate(rows[start:], start=start + 1):
        if not row or all(not cell.strip() for cell in row):
            continue
        for col, dest in ((xi, xs), (yi, ys)):
            if col < 0 or col >= len(row):
                raise LengthMismatch(f"{path}: row {file_row} has {len(row)} fields, need column index {col}")
            cell = row[col].strip()
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: row {file_row}, column {col}: cannot parse {cell!r} as a real number",
                    row=file_row,
                    column=col,
                ) from None
            if not math.isfinite(value):
                raise NonFiniteValue(f"{path}: row {file_row}, column {col}: non-finite value {cell!r}")
            dest.append(value)
    if not xs:
        raise EmptySample(f"{path}: no data rows")
    return PairedSample(xs, ys)


def write_curve_csv(curve: IndexCurve, path) -> None:
    """Write ``n,I_n,B_np`` rows; an undefined I is an empty cell.

    Floats use the shortest round-trip decimal form, so reading the file back
    reproduces the curve exactly and repeated writes are byte identical.
    """
    defined = curve.i_defined
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_HEADER)
        for k in range(len(curve)):
            i_cell = repr(float(curve.i_values[k])) if defined[k] else ""
            writer.writerow((int(curve.n_values[k]), i_cell, repr(float(curve.b_values[k]))))


def read_curve_csv(path, p: float = 2.0) -> IndexCurve:
    """Inverse of ``write_curve_csv``; the moment order p is not stored in the file."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise EmptySample(f"{path}: empty file")
    if tuple(cell.strip() for cell in rows[0]) != CURVE_HEADER:
        raise ParseError(f"{path}: expected header {','.join(CURVE_HEADER)}", row=1)
    n_values: list[int] = []
    i_values: list[float] = []
    b_values: list[float] = []
    for file_row, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise LengthMismatch(f"{path}: row {file_row} has {len(row)} fields, expected 3")
        try:
            n_values.append(int(row[0]))
            i_values.append(float(row[1]) if row[1].strip() else math.nan)
            b_values.append(float(row[2]))
        except ValueError:
            raise ParseError(f"{path}: row {file_row}: cannot parse curve row {row!r}", row=file_row) from None
    if not n_values:
        raise EmptySample(f"{path}: no data rows")
    return IndexCurve(n_values, i_values, b_values, p)


def series_to_json(series: Series) -> dict:
    """JSON-ready form: ``{"name": ..., "values": [...]}``."""
    return {"name": series.name, "values": [float(v) for v in series.values]}


def series_from_json(obj: dict) -> Series:
    """Inverse of ``series_to_json``."""
    try:
        values = obj["values"]
    except (TypeError, KeyError) as exc:
        raise ValueError("series JSON needs a 'values' array") from exc
    return Series(values, name=str(obj.get("name", "")))

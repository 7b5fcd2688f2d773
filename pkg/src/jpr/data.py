"""Data containers, CSV input/output, and column transforms."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFeatureError,
    InputIOError,
    NonFiniteError,
    ParseError,
    ShapeError,
)

# Decimal format that round-trips IEEE doubles exactly.
FLOAT_FORMAT = ".17g"


@dataclass(frozen=True)
class DataMatrix:
    """An n x p observation matrix: rows are samples, columns are features.

    Parameters
    ----------
    values : ndarray of shape (n, p)
        Finite real entries. Stored as a read-only float64 copy.
    feature_names : list of str, optional
        Column names; length must equal p when given.
    centered : bool
        True when each column has been mean-centered.
    """

    values: np.ndarray
    feature_names: list[str] | None = None
    centered: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise ShapeError(f"expected a 2-d data matrix, got {values.ndim} dimensions")
        n, p = values.shape
        if n < 1 or p < 2:
            raise ShapeError(f"need at least 1 row and 2 columns, got {n}x{p}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("data matrix contains NaN or Inf entries")
        if self.feature_names is not None:
            names = list(self.feature_names)
            if len(names) != p:
                raise ShapeError(f"{len(names)} feature names for {p} columns")
            object.__setattr__(self, "feature_names", names)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def _parse_cell(text, row, column):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{text!r} is not a number", row=row, column=column) from None
    if not np.isfinite(value):
        raise ParseError(f"{text!r} is not finite", row=row, column=column)
    return value


def _looks_like_header(fields):
    for cell in fields:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def load_csv(path, has_header: bool | None = None) -> DataMatrix:
    """Read a comma-separated data file into a DataMatrix.

    Parameters
    ----------
    path : str
        UTF-8 text file, one row per line, decimal-point reals.
    has_header : bool or None
        Whether the first row holds column names. None sniffs: a first row
        with any non-numeric field is treated as a header.

    Raises
    ------
    InputIOError, ParseError, ShapeError
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise ShapeError(f"{path}: file is empty")

    names = None
    start = 0
    if has_header is None:
        has_header = _looks_like_header(raw[0])
    if has_header:
        names = [cell.strip() for cell in raw[0]]
        start = 1

    body = raw[start:]
    if not body:
        raise ShapeError(f"{path}: no data rows")
    width = len(body[0])
    rows = []
    for i, fields in enumerate(body):
        line_no = start + i + 1
        if len(fields) != width:
            raise ShapeError(
                f"{path}: row {line_no} has {len(fields)} fields, expected {width}"
            )
        rows.append([_parse_cell(cell.strip(), line_no, j + 1) for j, cell in enumerate(fields)])

    values = np.asarray(rows, dtype=float)
    if values.shape[0] < 2 or values.shape[1] < 2:
        raise ShapeError(
            f"{path}: need at least 2 rows and 2 columns, got {values.shape[0]}x{values.shape[1]}"
        )
    return DataMatrix(values, feature_names=names, centered=False)


def write_csv(data: DataMatrix, path) -> None:
    """Write a DataMatrix as CSV (header row when feature names are present)."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            if data.feature_names is not None:
                writer.writerow(data.feature_names)
            for row in data.values:
                writer.writerow([format(v, FLOAT_FORMAT) for v in row])
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc


def load_matrix_csv(path) -> np.ndarray:
    """Read a square matrix stored as headerless CSV."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            raw = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise InputIOError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise ShapeError(f"{path}: file is empty")
    width = len(raw[0])
    rows = []
    for i, fields in enumerate(raw):
        if len(fields) != width:
            raise ShapeError(f"{path}: row {i + 1} has {len(fields)} fields, expected {width}")
        rows.append([_parse_cell(cell.strip(), i + 1, j + 1) for j, cell in enumerate(fields)])
    values = np.asarray(rows, dtype=float)
    if values.shape[0] != values.shape[1]:
        raise ShapeError(f"{path}: expected a square matrix, got {values.shape[0]}x{values.shape[1]}")
    return values


def write_matrix_csv(matrix, path) -> None:
    """Write a matrix as headerless CSV with 17 significant digits."""
    matrix = np.asarray(matrix, dtype=float)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            for row in np.atleast_2d(matrix):
                writer.writerow([format(v, FLOAT_FORMAT) for v in row])
    except OSError as exc:
        raise InputIOError(f"cannot write {path}: {exc}") from exc


def center_columns(data: DataMatrix) -> DataMatrix:
    """Subtract each column's mean. Returns a new DataMatrix with centered=True."""
    values = data.values - data.values.mean(axis=0, keepdims=True)
    return DataMatrix(values, feature_names=data.feature_names, centered=True)


def standardize_columns(data: DataMatrix) -> DataMatrix:
    """Scale each column to unit standard deviation (population convention).

    Raises DegenerateFeatureError when a column is constant.
    """
    std = data.values.std(axis=0)
    zero = np.flatnonzero(std == 0.0)
    if zero.size:
        raise DegenerateFeatureError(f"feature {zero[0]}: zero variance, cannot standardize")
    values = data.values / std[None, :]
    return DataMatrix(values, feature_names=data.feature_names, centered=data.centered)


def check_symmetric(matrix, tol: float = 1e-10) -> bool:
    """True when max|M - M^T| <= tol * max(1, max|M|)."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0)
    return float(np.max(np.abs(matrix - matrix.T))) <= tol * scale

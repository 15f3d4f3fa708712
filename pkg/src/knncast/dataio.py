"""CSV and JSON bridging between files and the in-memory model.

Formats are deliberately rigid so outputs are reproducible byte for byte:

* datasets: RFC-4180 CSV, header required, UTF-8, strict decimal numbers
  (no thousands separators, no NaN/inf tokens)
* dates: ISO-8601 calendar dates (YYYY-MM-DD) only
* forecast tables: floats with 10 significant digits (``%.10g``)
* matrices and JSON documents: shortest round-trip float representation
  (Python ``repr``), so read -> write -> read is lossless

JSON documents are written with sorted keys and two-space indentation.
Infinite MAPE entries (a sampled k too large for its test window) appear
as the token ``Infinity``, which ``json.loads`` accepts.
"""

from __future__ import annotations

import csv
import datetime
import json
import os
import re
import warnings
from dataclasses import dataclass

import numpy as np

from .core import ForecastResult, TimeSeriesDataset, build_dataset, derive_default_index
from .errors import (
    BadDate,
    IoError,
    LengthMismatch,
    MissingColumn,
    NonNumericValue,
    ParseError,
)
from .simulation import SimulatedSeries, series_index
from .tuning import TuningReport

PERIOD_MODES = ("from_month_of_date", "cyclic", "explicit_column")

_ISO_DATE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_NON_FINITE = re.compile(r"^[+-]?(nan|inf|infinity)$", re.IGNORECASE)


@dataclass(frozen=True)
class PeriodMode:
    """How seasonal periods are assigned to rows.

    * ``from_month_of_date``: calendar month (1-12) of the date column
    * ``cyclic``: positions cycle 1..n_periods in row order
    * ``explicit_column``: integer periods read from ``column``;
      ``n_periods`` defaults to the column maximum when not given
    """

    mode: str
    n_periods: int | None = None
    column: str | None = None

    def __post_init__(self):
        if self.mode not in PERIOD_MODES:
            raise ParseError(f"period mode must be one of {PERIOD_MODES}, got {self.mode!r}")
        if self.mode == "cyclic" and (self.n_periods is None or int(self.n_periods) < 1):
            raise ParseError("cyclic period mode requires n_periods >= 1")
        if self.mode == "explicit_column" and not self.column:
            raise ParseError("explicit_column period mode requires a column name")
        if self.n_periods is not None:
            object.__setattr__(self, "n_periods", int(self.n_periods))


@dataclass(frozen=True)
class DatasetSchema:
    """Column mapping from a CSV file to a dataset."""

    response_column: str
    period_mode: PeriodMode
    date_column: str | None = None
    predictor_columns: tuple = ()

    def __post_init__(self):
        if not self.response_column:
            raise ParseError("schema requires a response column")
        preds = tuple(self.predictor_columns)
        reserved = {self.response_column, self.date_column} - {None}
        overlap = reserved.intersection(preds)
        if overlap:
            raise ParseError(
                f"predictor columns must be disjoint from response/date, got {sorted(overlap)}"
            )
        if self.period_mode.mode == "from_month_of_date" and not self.date_column:
            raise ParseError("from_month_of_date period mode requires a date column")
        object.__setattr__(self, "predictor_columns", preds)


def load_schema(path) -> DatasetSchema:
    """Read a :class:`DatasetSchema` from a JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read schema {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"schema {path} must be a JSON object")
    mode_doc = doc.get("period_mode")
    if not isinstance(mode_doc, dict) or "mode" not in mode_doc:
        raise ParseError("schema requires a period_mode object with a 'mode' key")
    mode = PeriodMode(
        mode=mode_doc["mode"],
        n_periods=mode_doc.get("n_periods"),
        column=mode_doc.get("column"),
    )
    return DatasetSchema(
        response_column=doc.get("response_column", ""),
        period_mode=mode,
        date_column=doc.get("date_column"),
        predictor_columns=tuple(doc.get("predictor_columns", ())),
    )


def _parse_float(text: str, row: int, column: str) -> float:
    token = text.strip()
    if token == "" or _NON_FINITE.match(token):
        raise NonNumericValue(f"row {row}, column {column!r}: not a number: {text!r}")
    try:
        return float(token)
    except ValueError:
        raise NonNumericValue(f"row {row}, column {column!r}: not a number: {text!r}") from None


def _parse_int(text: str, row: int, column: str) -> int:
    value = _parse_float(text, row, column)
    if value != int(value):
        raise NonNumericValue(f"row {row}, column {column!r}: not an integer: {text!r}")
    return int(value)


def _parse_month(text: str, row: int, column: str) -> int:
    token = text.strip()
    if not _ISO_DATE.match(token):
        raise BadDate(f"row {row}, column {column!r}: not an ISO-8601 date: {text!r}")
    try:
        return datetime.date.fromisoformat(token).month
    except ValueError:
        raise BadDate(f"row {row}, column {column!r}: not a calendar date: {text!r}") from None


def _read_rows(path) -> tuple[list, list]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path} is empty; a header row is required") from None
            rows = [row for row in reader if row]
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise ParseError(f"{path} has duplicate column names")
    for i, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise ParseError(f"{path} row {i} has {len(row)} cells, expected {len(header)}")
    if not rows:
        raise ParseError(f"{path} has a header but no data rows")
    return header, rows


def read_dataset(path, schema: DatasetSchema) -> TimeSeriesDataset:
    """Read a CSV file into a validated dataset.

    Time orders are assigned 1..n in row order; periods follow the
    schema's period mode. Numeric cells are parsed strictly; failures name
    the offending row (1-based, excluding the header) and column.
    """
    header, rows = _read_rows(path)
    columns = {name: i for i, name in enumerate(header)}

    needed = [schema.response_column, *schema.predictor_columns]
    if schema.period_mode.mode == "from_month_of_date":
        needed.append(schema.date_column)
    elif schema.period_mode.mode == "explicit_column":
        needed.append(schema.period_mode.column)
    for name in needed:
        if name not in columns:
            raise MissingColumn(f"{path} has no column {name!r}")

    n = len(rows)
    y = np.array(
        [_parse_float(row[columns[schema.response_column]], i, schema.response_column)
         for i, row in enumerate(rows, start=1)]
    )
    X = None
    if schema.predictor_columns:
        X = np.array(
            [[_parse_float(row[columns[name]], i, name) for name in schema.predictor_columns]
             for i, row in enumerate(rows, start=1)]
        )

    mode = schema.period_mode
    if mode.mode == "from_month_of_date":
        p = np.array(
            [_parse_month(row[columns[schema.date_column]], i, schema.date_column)
             for i, row in enumerate(rows, start=1)],
            dtype=np.int64,
        )
        n_periods = 12
        t = np.arange(1, n + 1, dtype=np.int64)
    elif mode.mode == "cyclic":
        t, p = derive_default_index(n, mode.n_periods)
        n_periods = mode.n_periods
    else:
        p = np.array(
            [_parse_int(row[columns[mode.column]], i, mode.column)
             for i, row in enumerate(rows, start=1)],
            dtype=np.int64,
        )
        n_periods = mode.n_periods if mode.n_periods is not None else int(p.max())
        t = np.arange(1, n + 1, dtype=np.int64)
    return build_dataset(y, t, p, n_periods, X)


def fmt_sig10(value: float) -> str:
    """Format a float with 10 significant digits (forecast tables)."""
    return format(float(value), ".10g")


def fmt_repr(value: float) -> str:
    """Shortest round-trip float representation (matrices, dataset dumps)."""
    return repr(float(value))


def _open_write(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None


def write_forecast(result: ForecastResult, actuals=None, path=None) -> None:
    """Write a forecast as CSV rows of index, estimate [, actual, ape].

    Rows are ascending by index with floats at 10 significant digits. A
    zero actual leaves its ape cell empty (percent error is undefined
    there) and emits a warning instead of failing the file.
    """
    f = result.f_index
    est = result.estimates
    if actuals is not None:
        actuals = np.asarray(actuals, dtype=float)
        if actuals.shape[0] != f.shape[0]:
            raise LengthMismatch(
                f"{actuals.shape[0]} actuals for {f.shape[0]} forecast rows"
            )
    with _open_write(path) as fh:
        writer = csv.writer(fh)
        if actuals is None:
            writer.writerow(["index", "estimate"])
            for i in range(f.shape[0]):
                writer.writerow([int(f[i]), fmt_sig10(est[i])])
        else:
            writer.writerow(["index", "estimate", "actual", "ape"])
            for i in range(f.shape[0]):
                actual = actuals[i]
                if actual == 0.0:
                    warnings.warn(
                        f"actual at index {int(f[i])} is 0; ape left empty",
                        UserWarning,
                        stacklevel=2,
                    )
                    ape_cell = ""
                else:
                    ape_cell = fmt_sig10(abs(actual - est[i]) / abs(actual) * 100.0)
                writer.writerow([int(f[i]), fmt_sig10(est[i]), fmt_sig10(actual), ape_cell])


def read_indexed_column(path, column: str) -> tuple[np.ndarray, np.ndarray]:
    """Read the ``index`` column and one named numeric column from a CSV."""
    header, rows = _read_rows(path)
    columns = {name: i for i, name in enumerate(header)}
    for name in ("index", column):
        if name not in columns:
            raise MissingColumn(f"{path} has no column {name!r}")
    idx = np.array(
        [_parse_int(row[columns["index"]], i, "index") for i, row in enumerate(rows, start=1)],
        dtype=np.int64,
    )
    values = np.array(
        [_parse_float(row[columns[column]], i, column) for i, row in enumerate(rows, start=1)]
    )
    return idx, values


def write_matrix_csv(values, path) -> None:
    """Write a matrix as bare CSV: one row per line, no header."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 2:
        raise IoError(f"matrix must be 2-d, got shape {v.shape}")
    with _open_write(path) as fh:
        for row in v:
            fh.write(",".join(fmt_repr(x) for x in row))
            fh.write("\n")


def read_matrix_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot read matrix {path}: {exc}") from None


def write_tuning_report(report: TuningReport, json_path, matrix_path=None) -> str:
    """Write a tuning report as JSON plus the winning matrix as CSV.

    The JSON document carries the winning weights and k, the full grid
    with per-row MAPE, and the (relative) name of the matrix file, which
    defaults to the report name with a ``.sw.csv`` suffix. Returns the
    matrix path actually written.
    """
    json_path = os.fspath(json_path)
    if matrix_path is None:
        stem, _ = os.path.splitext(json_path)
        matrix_path = stem + ".sw.csv"
    write_matrix_csv(report.sw_opt.values, matrix_path)
    doc = {
        "weight_opt": {
            "alpha": report.weight_opt.alpha,
            "beta": report.weight_opt.beta,
            "gamma": report.weight_opt.gamma,
        },
        "k_opt": report.k_opt,
        "test_mape": report.test_mape,
        "mape_all": [float(v) for v in report.mape_all],
        "grid": [
            {"k": row.k, "alpha": row.alpha, "beta": row.beta, "gamma": row.gamma}
            for row in report.grid
        ],
        "matrix_path": os.path.basename(os.fspath(matrix_path)),
    }
    with _open_write(json_path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return os.fspath(matrix_path)


def write_simulated_series(sim: SimulatedSeries, csv_path, json_path) -> None:
    """Write a simulated series as CSV plus a JSON sidecar of components.

    The CSV has columns t, p, y, x1..xd; the sidecar records every random
    component so the series can be reconstructed or audited.
    """
    t, p = series_index(sim)
    with _open_write(csv_path) as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "p", "y"] + [f"x{j + 1}" for j in range(sim.X.shape[1])])
        for i in range(sim.config.n):
            writer.writerow(
                [int(t[i]), int(p[i]), fmt_repr(sim.y[i])]
                + [fmt_repr(v) for v in sim.X[i]]
            )
    doc = {
        "family": sim.config.family,
        "n": sim.config.n,
        "seed": sim.config.seed,
        "d": sim.X.shape[1],
        "c": sim.c,
        "b": None if sim.b is None else [float(v) for v in sim.b],
        "beta_sin": sim.beta_sin,
        "beta_cos": sim.beta_cos,
        "s": sim.s,
        "arima_orders": list(sim.arima_orders),
        "phi": [float(v) for v in sim.phi],
        "theta": [float(v) for v in sim.theta],
        "eta": [float(v) for v in sim.eta],
        "noise_family": sim.noise_family,
        "noise_param": sim.noise_param,
        "epsilon": [float(v) for v in sim.epsilon],
        "mu_x": sim.mu_x,
        "sigma_x": sim.sigma_x,
        "m": sim.m,
        "m1": sim.m1,
        "m2": sim.m2,
        "bp": sim.bp,
        "sigma_corr": None if sim.sigma_corr is None else
            [[float(v) for v in row] for row in sim.sigma_corr],
    }
    with _open_write(json_path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_mape_table(names, values, path) -> None:
    """Write a one-row MAPE table: header of method names, one row of values."""
    if len(names) != len(values):
        raise LengthMismatch("names and values must have equal lengths")
    with _open_write(path) as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names))
        writer.writerow([fmt_sig10(v) for v in values])

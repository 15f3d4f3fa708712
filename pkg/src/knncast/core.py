"""Core data model shared by every other module.

All types are immutable after construction and validate their invariants
once, in ``__post_init__``; a partially valid instance is never observable.
Indices in user-facing contracts are 1-based (position 1 is the first
observation); internal numpy storage is 0-based and translated at the
boundary by the functions that consume these types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    LengthMismatch,
    NonIncreasingTime,
    NonNumericValue,
    PeriodOutOfRange,
)

SIMILARITY_KINDS = ("St", "Sp", "Sx", "Sw")

# Tolerance for "weights sum to one" checks throughout the package.
WEIGHT_SUM_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True)
    out.flags.writeable = False
    return out


def _as_int_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise LengthMismatch(f"{name} must be a nonempty 1-d sequence")
    if not np.issubdtype(arr.dtype, np.number):
        raise NonNumericValue(f"{name} must be numeric, got dtype {arr.dtype}")
    if not np.all(np.isfinite(arr.astype(float))):
        raise NonNumericValue(f"{name} contains non-finite values")
    as_int = arr.astype(np.int64)
    if np.any(as_int != arr):
        raise NonNumericValue(f"{name} must contain integer values")
    return as_int


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise LengthMismatch(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise NonNumericValue(f"{name} contains missing or non-finite values")
    return arr


@dataclass(frozen=True)
class TimeSeriesDataset:
    """A univariate response series with aligned time metadata.

    Attributes
    ----------
    y : ndarray, shape (n,)
        Response observations.
    t : ndarray of int, shape (n,)
        Time orders, strictly increasing. Gaps are permitted; only
        differences of time orders are ever used downstream.
    p : ndarray of int, shape (n,)
        Seasonal period of each observation, each in [1, n_periods].
    n_periods : int
        Number of periods in a full seasonal cycle (the maximum value
        ``p`` may take; the minimum is always 1).
    X : ndarray, shape (n, d), optional
        Exogenous predictors, rows aligned with ``y``.
    """

    y: np.ndarray
    t: np.ndarray
    p: np.ndarray
    n_periods: int
    X: np.ndarray | None = None

    def __post_init__(self):
        y = _as_float_array(self.y, "y")
        if y.ndim != 1:
            raise LengthMismatch("y must be 1-dimensional")
        t = _as_int_array(self.t, "t")
        p = _as_int_array(self.p, "p")
        n = y.shape[0]
        if t.shape[0] != n or p.shape[0] != n:
            raise LengthMismatch(
                f"y, t, p must have equal lengths, got {n}, {t.shape[0]}, {p.shape[0]}"
            )
        if int(self.n_periods) < 1:
            raise PeriodOutOfRange(f"n_periods must be >= 1, got {self.n_periods}")
        if np.any(p < 1) or np.any(p > int(self.n_periods)):
            raise PeriodOutOfRange(
                f"period values must lie in [1, {self.n_periods}]"
            )
        if np.any(np.diff(t) <= 0):
            raise NonIncreasingTime("time orders must be strictly increasing")
        X = self.X
        if X is not None:
            X = np.asarray(X, dtype=float)
            if X.ndim == 1:
                X = X.reshape(-1, 1)
            if X.ndim != 2:
                raise LengthMismatch("X must be a 2-d matrix")
            if X.shape[0] != n:
                raise LengthMismatch(
                    f"X has {X.shape[0]} rows but y has {n} observations"
                )
            if not np.all(np.isfinite(X)):
                raise NonNumericValue("X contains missing or non-finite values")
            X = _readonly(X)
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "t", _readonly(t))
        object.__setattr__(self, "p", _readonly(p))
        object.__setattr__(self, "n_periods", int(self.n_periods))
        object.__setattr__(self, "X", X)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def d(self) -> int:
        return 0 if self.X is None else self.X.shape[1]


@dataclass(frozen=True)
class SimilarityMatrix:
    """An n x n symmetric matrix of pairwise similarities in (0, 1].

    ``kind`` tags which measure produced it: "St" (time order), "Sp"
    (seasonal period), "Sx" (exogenous predictors), or "Sw" (weighted
    combination).
    """

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in SIMILARITY_KINDS:
            raise ValueError(
                f"kind must be one of {SIMILARITY_KINDS}, got {self.kind!r}"
            )
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] == 0:
            raise ValueError(f"values must be a nonempty square matrix, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("similarity entries must be finite")
        if np.any(v <= 0.0) or np.any(v > 1.0):
            raise ValueError("similarity entries must lie in (0, 1]")
        if not np.array_equal(np.diagonal(v), np.ones(v.shape[0])):
            raise ValueError("similarity diagonal must be exactly 1")
        if not np.array_equal(v, v.T):
            raise ValueError("similarity matrix must be symmetric")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class HyperParams:
    """A tuned or sampled hyperparameter set: neighbor count plus weights.

    The weights must be nonnegative and sum to 1 within 1e-12.
    """

    k: int
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        w = (float(self.alpha), float(self.beta), float(self.gamma))
        if any(x < 0.0 for x in w):
            raise ValueError(f"weights must be nonnegative, got {w}")
        if abs(sum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {sum(w)!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "alpha", w[0])
        object.__setattr__(self, "beta", w[1])
        object.__setattr__(self, "gamma", w[2])


@dataclass(frozen=True)
class ForecastResult:
    """Estimates for a set of forecast positions, with provenance.

    ``f_index`` holds the (1-based, ascending) positions estimated;
    ``estimates`` is aligned with it. ``neighbor_sets`` records, per
    estimate, which source observations were averaged.
    """

    f_index: np.ndarray
    estimates: np.ndarray
    neighbor_sets: tuple = field(default=())

    def __post_init__(self):
        f = _as_int_array(self.f_index, "f_index")
        e = np.asarray(self.estimates, dtype=float)
        if e.shape[0] != f.shape[0]:
            raise LengthMismatch("estimates and f_index must have equal lengths")
        object.__setattr__(self, "f_index", _readonly(f))
        object.__setattr__(self, "estimates", _readonly(e))
        object.__setattr__(self, "neighbor_sets", tuple(self.neighbor_sets))


def build_dataset(y, t, p, n_periods: int, X=None) -> TimeSeriesDataset:
    """Validate and assemble a :class:`TimeSeriesDataset`.

    Raises
    ------
    LengthMismatch
        If the aligned sequences differ in length.
    PeriodOutOfRange
        If any period falls outside [1, n_periods].
    NonIncreasingTime
        If time orders are not strictly increasing.
    NonNumericValue
        If any value is missing or non-numeric (no silent coercion).
    """
    return TimeSeriesDataset(y=np.asarray(y), t=np.asarray(t), p=np.asarray(p),
                             n_periods=n_periods, X=X)


def derive_default_index(n: int, n_periods: int) -> tuple[np.ndarray, np.ndarray]:
    """Default time orders 1..n and cyclic periods 1..n_periods repeating.

    Position i (1-based) receives period ((i - 1) mod n_periods) + 1.
    """
    if n < 1:
        raise LengthMismatch(f"n must be >= 1, got {n}")
    if n_periods < 1:
        raise PeriodOutOfRange(f"n_periods must be >= 1, got {n_periods}")
    t = np.arange(1, n + 1, dtype=np.int64)
    p = (np.arange(n, dtype=np.int64) % n_periods) + 1
    return t, p

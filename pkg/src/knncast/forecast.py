"""K-nearest-neighbor forecasting over a similarity matrix, plus baselines.

The forecaster ranks candidate observations by their similarity to each
forecast position and averages the response at the top k. Candidates are
every position outside the forecast index, so previously estimated points
never feed later estimates. Two simple baselines used for desk-scale
comparisons live here as well: a seasonal-naive carry-forward and an
ordinary-least-squares fit of the response on the predictors.

Forecast positions are independent of each other; the similarity matrix is
shared read-only, so computing columns in parallel is safe as long as
results are assembled in ascending index order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import ForecastResult, SimilarityMatrix
from .errors import (
    IndexOutOfRange,
    KTooLarge,
    LengthMismatch,
    NoSeasonalPrior,
    RankDeficient,
)


@dataclass(frozen=True)
class NeighborSet:
    """The k source observations averaged for one forecast position.

    Indices are 1-based series positions, never inside the forecast index;
    similarities are sorted nonincreasing, ties broken by smaller index.
    """

    target_index: int
    neighbor_indices: tuple
    neighbor_similarities: tuple


def _as_matrix(sim) -> np.ndarray:
    if isinstance(sim, SimilarityMatrix):
        return sim.values
    v = np.asarray(sim, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise IndexOutOfRange(f"similarity matrix must be square, got shape {v.shape}")
    return v


def _clean_f_index(f_index, n: int) -> np.ndarray:
    f = np.unique(np.asarray(f_index, dtype=np.int64))
    if f.size == 0:
        raise IndexOutOfRange("forecast index must be nonempty")
    if f[0] < 1 or f[-1] > n:
        raise IndexOutOfRange(
            f"forecast index must lie in [1, {n}], got range [{f[0]}, {f[-1]}]"
        )
    return f


def _warn_if_not_suffix(f: np.ndarray, n: int) -> None:
    # Non-suffix forecast indices are legal but let later observations into
    # the candidate pool, which is rarely what a backtest intends.
    if not (f[-1] == n and f.size == f[-1] - f[0] + 1):
        warnings.warn(
            "forecast index is not a contiguous suffix of the series; "
            "chronologically later observations will be candidate neighbors",
            UserWarning,
            stacklevel=3,
        )


def nn_reg(similarities, candidates, y, k: int, target_index: int = 0):
    """Average the response at the k most similar candidates.

    Parameters
    ----------
    similarities : array_like
        Similarity of each candidate to the target, aligned with
        ``candidates``.
    candidates : array_like of int
        1-based series positions eligible as neighbors.
    y : array_like
        Full response series (position 1 is ``y[0]``).
    k : int
        Number of neighbors to average.
    target_index : int, optional
        Position being estimated; recorded in the returned
        :class:`NeighborSet`.

    Returns
    -------
    (float, NeighborSet)
        The estimate and the neighbors behind it. Candidates are ranked
        by similarity descending with ties going to the smaller position.
    """
    sims = np.asarray(similarities, dtype=float)
    cand = np.asarray(candidates, dtype=np.int64)
    y = np.asarray(y, dtype=float)
    if sims.shape[0] != cand.shape[0]:
        raise LengthMismatch("similarities and candidates must have equal lengths")
    if cand.size == 0 or k < 1 or k > cand.size:
        raise KTooLarge(f"k={k} with {cand.size} candidates")
    order = np.lexsort((cand, -sims))
    top = order[:k]
    idx = cand[top]
    estimate = float(np.mean(y[idx - 1]))
    neighbors = NeighborSet(
        target_index=int(target_index),
        neighbor_indices=tuple(int(i) for i in idx),
        neighbor_similarities=tuple(float(s) for s in sims[top]),
    )
    return estimate, neighbors


def knn_forecast(sim, f_index, k: int, y) -> ForecastResult:
    """Forecast the positions in ``f_index`` by k-nearest-neighbor averaging.

    Every position outside ``f_index`` is a candidate neighbor for every
    forecast position; estimated points are never added to the candidate
    pool. Positions are 1-based and results come back in ascending order.

    Raises
    ------
    KTooLarge
        If k exceeds the number of candidates (n - len(f_index)).
    IndexOutOfRange
        If f_index is empty or falls outside [1, n].
    """
    V = _as_matrix(sim)
    y = np.asarray(y, dtype=float)
    n = V.shape[0]
    if y.shape[0] != n:
        raise LengthMismatch(f"y has length {y.shape[0]} but matrix is {n} x {n}")
    f = _clean_f_index(f_index, n)
    _warn_if_not_suffix(f, n)
    mask = np.ones(n, dtype=bool)
    mask[f - 1] = False
    candidates = np.nonzero(mask)[0] + 1
    if k < 1 or k > candidates.size:
        raise KTooLarge(
            f"k={k} but only {candidates.size} candidates remain outside the forecast index"
        )
    estimates = np.empty(f.size, dtype=float)
    neighbor_sets = []
    for out_pos, j in enumerate(f):
        column = V[candidates - 1, j - 1]
        estimates[out_pos], neighbors = nn_reg(column, candidates, y, k, target_index=int(j))
        neighbor_sets.append(neighbors)
    return ForecastResult(f_index=f, estimates=estimates, neighbor_sets=tuple(neighbor_sets))


def forecast_estimates(sim, f_index, k: int, y) -> np.ndarray:
    """Estimates of :func:`knn_forecast` without neighbor provenance.

    Ranks all forecast columns in one stable sort, which makes it the
    right call inside tuning sweeps that evaluate thousands of candidate
    matrices. Neighbor selection is identical to :func:`knn_forecast`
    (similarity descending, ties to the smaller position); estimates agree
    within float rounding.
    """
    V = _as_matrix(sim)
    y = np.asarray(y, dtype=float)
    n = V.shape[0]
    if y.shape[0] != n:
        raise LengthMismatch(f"y has length {y.shape[0]} but matrix is {n} x {n}")
    f = _clean_f_index(f_index, n)
    _warn_if_not_suffix(f, n)
    mask = np.ones(n, dtype=bool)
    mask[f - 1] = False
    candidates = np.nonzero(mask)[0] + 1
    if k < 1 or k > candidates.size:
        raise KTooLarge(
            f"k={k} but only {candidates.size} candidates remain outside the forecast index"
        )
    sims = V[np.ix_(candidates - 1, f - 1)]
    # stable sort on descending similarity; candidates are ascending, so
    # original row order is exactly the smaller-position tie-break
    order = np.argsort(-sims, axis=0, kind="stable")[:k]
    return np.mean(y[candidates[order] - 1], axis=0)


def seasonal_naive(y, p, f_index) -> np.ndarray:
    """Carry forward the most recent same-period observation.

    For each forecast position, the estimate is the response at the
    latest earlier position that shares its seasonal period and is not
    itself being forecast.

    Raises
    ------
    NoSeasonalPrior
        If some forecast position has no such earlier observation.
    """
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=np.int64)
    if y.shape[0] != p.shape[0]:
        raise LengthMismatch("y and p must have equal lengths")
    n = y.shape[0]
    f = _clean_f_index(f_index, n)
    in_forecast = np.zeros(n + 1, dtype=bool)
    in_forecast[f] = True
    out = np.empty(f.size, dtype=float)
    for out_pos, j in enumerate(f):
        source = 0
        for i in range(int(j) - 1, 0, -1):
            if not in_forecast[i] and p[i - 1] == p[j - 1]:
                source = i
                break
        if source == 0:
            raise NoSeasonalPrior(
                f"no earlier non-forecast observation with period {p[j - 1]} "
                f"before position {j}"
            )
        out[out_pos] = y[source - 1]
    return out


def ols_baseline(X, y, f_index) -> np.ndarray:
    """Least-squares fit of y on X (with intercept), predicting f_index rows.

    The fit uses only rows outside the forecast index. Raises
    :class:`RankDeficient` when those rows cannot identify the
    coefficients (fewer training rows than columns + 1, or a collinear
    design).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if X.shape[0] != n:
        raise LengthMismatch(f"X has {X.shape[0]} rows but y has {n}")
    f = _clean_f_index(f_index, n)
    mask = np.ones(n, dtype=bool)
    mask[f - 1] = False
    design = np.column_stack([np.ones(n), X])
    ncols = design.shape[1]
    train = design[mask]
    if train.shape[0] < ncols:
        raise RankDeficient(
            f"{train.shape[0]} training rows cannot identify {ncols} coefficients"
        )
    coef, _, rank, _ = np.linalg.lstsq(train, y[mask], rcond=None)
    if rank < ncols:
        raise RankDeficient(
            f"design matrix has rank {rank} but {ncols} columns (intercept included)"
        )
    return design[f - 1] @ coef

"""Builders for the four n x n similarity matrices.

Three component matrices score pairwise closeness of the observations on
different aspects of the series: time order (kind "St"), seasonal period
(kind "Sp"), and exogenous predictors (kind "Sx"). The weighted matrix
(kind "Sw") is their convex combination,

    Sw = alpha * St + beta * Sp + gamma * Sx,

and is the matrix normally handed to the forecaster. Storage is dense
row-major; at desk scale (up to a few thousand points) the O(n^2) memory
is acceptable and keeps neighbor sorting simple.

The builders are pure functions; results are deterministic regardless of
parallel callers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import WEIGHT_SUM_TOL, SimilarityMatrix, TimeSeriesDataset
from .distance import pairwise_distance, parse_metric, to_similarity
from .errors import MissingExogenous, PeriodOutOfRange

# Input weights whose sum deviates from 1 by more than this trigger a
# normalization warning (they are rescaled either way).
WEIGHT_WARN_TOL = 1e-9


@dataclass(frozen=True)
class WeightTriple:
    """Relative importance of the St, Sp, Sx components, summing to 1."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        w = (float(self.alpha), float(self.beta), float(self.gamma))
        if any(x < 0.0 for x in w):
            raise ValueError(f"weights must be nonnegative, got {w}")
        if abs(sum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(
                f"weights must sum to 1 within {WEIGHT_SUM_TOL}; "
                f"got sum {sum(w)!r} (use WeightTriple.normalized to rescale)"
            )
        object.__setattr__(self, "alpha", w[0])
        object.__setattr__(self, "beta", w[1])
        object.__setattr__(self, "gamma", w[2])

    @classmethod
    def normalized(cls, alpha: float, beta: float, gamma: float) -> "WeightTriple":
        """Rescale raw nonnegative weights to sum to 1.

        Warns when the raw sum deviates from 1 by more than 1e-9; an
        all-zero triple is an error.
        """
        raw = (float(alpha), float(beta), float(gamma))
        if any(x < 0.0 for x in raw):
            raise ValueError(f"weights must be nonnegative, got {raw}")
        total = sum(raw)
        if total == 0.0:
            raise ValueError("cannot normalize an all-zero weight triple")
        if abs(total - 1.0) > WEIGHT_WARN_TOL:
            warnings.warn(
                f"weights {raw} sum to {total!r}; normalizing to sum to 1",
                UserWarning,
                stacklevel=2,
            )
        return cls(raw[0] / total, raw[1] / total, raw[2] / total)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class SwMatrices:
    """A weighted similarity matrix plus the components it combines.

    ``sx`` is None when the dataset has no predictors and gamma is 0, in
    which case ``sw`` reduces to alpha * St + beta * Sp.
    """

    sw: SimilarityMatrix
    st: SimilarityMatrix
    sp: SimilarityMatrix
    sx: SimilarityMatrix | None


def st_matrix(t) -> SimilarityMatrix:
    """Similarity by time order: entry (i, j) is 1 / (1 + |t_i - t_j|).

    Depends only on differences of time orders, so the result is
    translation invariant and Toeplitz for consecutive orders.
    """
    t = np.asarray(t, dtype=np.int64)
    d = np.abs(t[:, None] - t[None, :]).astype(float)
    return SimilarityMatrix("St", to_similarity(d))


def sp_matrix(p, n_periods: int) -> SimilarityMatrix:
    """Similarity by seasonal period: 1 / (1 + wrap-aware period distance).

    Periods one step apart across the cycle boundary (such as positions 1
    and n_periods) score the same as periods one step apart directly.
    """
    p = np.asarray(p, dtype=np.int64)
    n_periods = int(n_periods)
    if n_periods < 1 or np.any(p < 1) or np.any(p > n_periods):
        raise PeriodOutOfRange(f"periods must lie in [1, {n_periods}]")
    lo = np.minimum(p[:, None], p[None, :])
    hi = np.maximum(p[:, None], p[None, :])
    direct = np.abs(p[:, None] - p[None, :])
    wrapped = np.abs(lo - 1) + np.abs(n_periods - hi) + 1
    d = np.minimum(direct, wrapped).astype(float)
    return SimilarityMatrix("Sp", to_similarity(d))


def sx_matrix(X, metric="euclidean") -> SimilarityMatrix:
    """Similarity by exogenous predictors: 1 / (1 + row distance).

    ``X`` is an n x d matrix (a plain vector is promoted to n x 1);
    ``metric`` names the row distance, see :func:`knncast.distance.d_vector`.
    """
    m = parse_metric(metric)
    d = pairwise_distance(X, m)
    return SimilarityMatrix("Sx", to_similarity(d))


def combine_components(st: np.ndarray, sp: np.ndarray, sx: np.ndarray | None,
                       weights: WeightTriple) -> np.ndarray:
    """Convex combination of component similarity arrays.

    The exact float combination can land a hair above 1 on the diagonal
    (the weights sum to 1 only within rounding), so the diagonal is pinned
    to 1 and entries are capped at 1; both adjustments are below 1e-12.
    """
    s = weights.alpha * st + weights.beta * sp
    if sx is not None:
        s = s + weights.gamma * sx
    np.minimum(s, 1.0, out=s)
    np.fill_diagonal(s, 1.0)
    return s


def sw_matrix(dataset: TimeSeriesDataset, weights: WeightTriple,
              metric="euclidean") -> SwMatrices:
    """Build the weighted similarity matrix and its components.

    When the dataset has no predictors, a nonzero gamma raises
    :class:`MissingExogenous`; with gamma == 0 the predictor component is
    skipped and the combination uses St and Sp only.
    """
    st = st_matrix(dataset.t)
    sp = sp_matrix(dataset.p, dataset.n_periods)
    if dataset.X is None:
        if weights.gamma > 0.0:
            raise MissingExogenous(
                "dataset has no predictor matrix but gamma > 0; "
                "provide X or set gamma to 0"
            )
        sx = None
    else:
        sx = sx_matrix(dataset.X, metric)
    combined = combine_components(
        st.values, sp.values, None if sx is None else sx.values, weights
    )
    return SwMatrices(SimilarityMatrix("Sw", combined), st, sp, sx)

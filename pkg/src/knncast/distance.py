"""Dissimilarity kernels and the dissimilarity-to-similarity transform.

Three kinds of dissimilarity feed the matrix builders: absolute time-order
distance, wrap-aware seasonal-period distance, and pairwise vector distance
between exogenous predictor rows under one of six metrics. Every
dissimilarity D >= 0 is mapped to a similarity in (0, 1] by 1 / (1 + D).

All functions here are pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativeDistance, PeriodOutOfRange

METRIC_NAMES = ("euclidean", "maximum", "manhattan", "canberra", "binary", "minkowski")


@dataclass(frozen=True)
class Metric:
    """A vector distance metric; ``order`` applies to minkowski only."""

    name: str
    order: float = 2.0

    def __post_init__(self):
        if self.name not in METRIC_NAMES:
            raise ValueError(
                f"unknown metric {self.name!r}; valid metrics are {', '.join(METRIC_NAMES)}"
            )
        if self.name == "minkowski" and not float(self.order) > 0.0:
            raise ValueError(f"minkowski order must be > 0, got {self.order}")
        object.__setattr__(self, "order", float(self.order))


def parse_metric(spec) -> Metric:
    """Build a :class:`Metric` from a string like ``"euclidean"`` or ``"minkowski:3"``.

    A bare ``"minkowski"`` defaults to order 2 (which coincides with
    euclidean). An existing :class:`Metric` passes through unchanged.
    """
    if isinstance(spec, Metric):
        return spec
    text = str(spec).strip()
    if ":" in text:
        name, _, order = text.partition(":")
        try:
            return Metric(name.strip(), float(order))
        except ValueError as exc:
            raise ValueError(f"bad metric spec {spec!r}: {exc}") from None
    return Metric(text)


def d_time(t1: int, t2: int) -> float:
    """Absolute difference of two time orders."""
    return float(abs(int(t1) - int(t2)))


def d_period(p1: int, p2: int, p_max: int) -> float:
    """Wrap-aware distance between two cycle positions in [1, p_max].

    The distance is the smaller of the direct gap ``|p1 - p2|`` and the
    gap that wraps through the cycle boundary,
    ``|min(p1, p2) - 1| + |p_max - max(p1, p2)| + 1``. In a 12-cycle,
    positions 1 and 12 are therefore 1 apart, not 11.
    """
    p1, p2, p_max = int(p1), int(p2), int(p_max)
    if not (1 <= p1 <= p_max and 1 <= p2 <= p_max):
        raise PeriodOutOfRange(
            f"periods must lie in [1, {p_max}], got {p1} and {p2}"
        )
    direct = abs(p1 - p2)
    wrapped = abs(min(p1, p2) - 1) + abs(p_max - max(p1, p2)) + 1
    return float(min(direct, wrapped))


def _kernel_euclidean(diff: np.ndarray) -> float:
    return float(np.sqrt(np.sum(diff * diff)))


def _kernel_maximum(diff: np.ndarray) -> float:
    return float(np.max(np.abs(diff)))


def _kernel_manhattan(diff: np.ndarray) -> float:
    return float(np.sum(np.abs(diff)))


def d_vector(a, b, metric="euclidean") -> float:
    """Distance between two equal-length real vectors under ``metric``.

    Metric definitions:

    * euclidean: sqrt(sum (a_i - b_i)^2)
    * maximum: max_i |a_i - b_i|
    * manhattan: sum |a_i - b_i|
    * canberra: sum |a_i - b_i| / (|a_i| + |b_i|), where a term with a
      zero denominator contributes 0
    * binary: share of coordinates where exactly one of a_i, b_i is
      nonzero, among coordinates where at least one is nonzero; 0 when no
      coordinate is nonzero in either vector
    * minkowski(m): (sum |a_i - b_i|^m)^(1/m)
    """
    m = parse_metric(metric)
    av = np.asarray(a, dtype=float).ravel()
    bv = np.asarray(b, dtype=float).ravel()
    if av.shape[0] != bv.shape[0] or av.shape[0] == 0:
        raise DimensionMismatch(
            f"vectors must have equal nonzero length, got {av.shape[0]} and {bv.shape[0]}"
        )
    diff = av - bv
    if m.name == "euclidean":
        return _kernel_euclidean(diff)
    if m.name == "maximum":
        return _kernel_maximum(diff)
    if m.name == "manhattan":
        return _kernel_manhattan(diff)
    if m.name == "canberra":
        denom = np.abs(av) + np.abs(bv)
        terms = np.divide(np.abs(diff), denom, out=np.zeros_like(denom), where=denom > 0)
        return float(np.sum(terms))
    if m.name == "binary":
        a_nz = av != 0.0
        b_nz = bv != 0.0
        union = np.count_nonzero(a_nz | b_nz)
        if union == 0:
            return 0.0
        mismatch = np.count_nonzero(a_nz ^ b_nz)
        return float(mismatch / union)
    # minkowski
    return float(np.sum(np.abs(diff) ** m.order) ** (1.0 / m.order))


def pairwise_distance(X: np.ndarray, metric="euclidean") -> np.ndarray:
    """n x n matrix of ``d_vector`` distances between the rows of ``X``.

    Vectorized over all row pairs; results are bit-identical to calling
    :func:`d_vector` on each pair.
    """
    m = parse_metric(metric)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise DimensionMismatch(f"X must be a nonempty 2-d matrix, got shape {X.shape}")
    diff = X[:, None, :] - X[None, :, :]
    if m.name == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=2))
    if m.name == "maximum":
        return np.max(np.abs(diff), axis=2)
    if m.name == "manhattan":
        return np.sum(np.abs(diff), axis=2)
    if m.name == "canberra":
        denom = np.abs(X)[:, None, :] + np.abs(X)[None, :, :]
        terms = np.divide(np.abs(diff), denom, out=np.zeros_like(denom), where=denom > 0)
        return np.sum(terms, axis=2)
    if m.name == "binary":
        nz = X != 0.0
        mismatch = np.sum(nz[:, None, :] ^ nz[None, :, :], axis=2, dtype=float)
        union = np.sum(nz[:, None, :] | nz[None, :, :], axis=2, dtype=float)
        return np.divide(mismatch, union, out=np.zeros_like(union), where=union > 0)
    # minkowski
    return np.sum(np.abs(diff) ** m.order, axis=2) ** (1.0 / m.order)


def to_similarity(d):
    """Map a dissimilarity d >= 0 (scalar or array) to 1 / (1 + d) in (0, 1]."""
    arr = np.asarray(d, dtype=float)
    if np.any(arr < 0.0):
        raise NegativeDistance("dissimilarities must be nonnegative")
    out = 1.0 / (1.0 + arr)
    return float(out) if np.isscalar(d) or arr.ndim == 0 else out

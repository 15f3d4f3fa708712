"""Random-search tuning of the weighted-similarity hyperparameters.

The tuner samples hyperparameter sets {k, alpha, beta, gamma}, scores each
one by the mean absolute percent error of a k-nearest-neighbor forecast
over a trailing test window, and reports the best set together with the
weighted similarity matrix it induces. A further trailing validation
holdout can be carved off first; nothing inside it influences any score.

Randomness comes from numpy's ``default_rng`` (the PCG64 generator), so a
given seed reproduces the same grid on every platform. Per grid row the
draws happen in a fixed order: all k values first as one block, then the
raw weight triples as one block, each triple normalized to sum to 1.

Grid rows are independent once sampled; evaluation may run on a thread
pool (``jobs``) without changing any result.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import HyperParams, SimilarityMatrix
from .errors import KTooLarge, LengthMismatch, ZeroActual
from .forecast import forecast_estimates
from .similarity import WeightTriple, combine_components

# Hard cap on the default neighbor-count ceiling.
MAX_K_CAP = 50
MAX_K_FRACTION = 0.4


@dataclass(frozen=True)
class TuningConfig:
    """Sweep settings.

    ``test_h`` is the trailing test-window length used for scoring;
    ``val_holdout_len`` observations at the very end of the series are
    removed before that window is placed. ``max_k`` caps sampled neighbor
    counts; when None it defaults to min(floor(0.4 * n), 50) for a series
    of length n.
    """

    grid_len: int
    test_h: int
    seed: int
    max_k: int | None = None
    val_holdout_len: int = 0

    def __post_init__(self):
        if int(self.grid_len) < 1:
            raise ValueError(f"grid_len must be >= 1, got {self.grid_len}")
        if int(self.test_h) < 1:
            raise ValueError(f"test_h must be >= 1, got {self.test_h}")
        if int(self.val_holdout_len) < 0:
            raise ValueError(f"val_holdout_len must be >= 0, got {self.val_holdout_len}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if self.max_k is not None and int(self.max_k) < 1:
            raise ValueError(f"max_k must be >= 1 when given, got {self.max_k}")
        for name in ("grid_len", "test_h", "seed", "val_holdout_len"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.max_k is not None:
            object.__setattr__(self, "max_k", int(self.max_k))


@dataclass(frozen=True)
class TuningReport:
    """Outcome of one sweep.

    ``grid`` holds every hyperparameter set tested, aligned with
    ``mape_all``; ``test_mape`` is the minimum of ``mape_all`` and belongs
    to the row (first, on ties) that produced ``weight_opt`` and ``k_opt``.
    ``sw_opt`` is rebuilt from the winning weights over the full series
    length, validation holdout included.
    """

    weight_opt: WeightTriple
    k_opt: int
    test_mape: float
    mape_all: np.ndarray
    grid: tuple
    sw_opt: SimilarityMatrix


def ape(actual: float, estimate: float) -> float:
    """Absolute percent error of one estimate: |a - e| / |a| * 100."""
    actual = float(actual)
    if actual == 0.0:
        raise ZeroActual("percent error is undefined for an actual value of 0")
    return abs(actual - float(estimate)) / abs(actual) * 100.0


def mape(actuals, estimates) -> float:
    """Mean absolute percent error over aligned sequences."""
    a = np.asarray(actuals, dtype=float)
    e = np.asarray(estimates, dtype=float)
    if a.shape != e.shape or a.ndim != 1 or a.size == 0:
        raise LengthMismatch(
            f"actuals and estimates must be equal-length nonempty vectors, "
            f"got shapes {a.shape} and {e.shape}"
        )
    if np.any(a == 0.0):
        raise ZeroActual("percent error is undefined for an actual value of 0")
    return float(np.mean(np.abs(a - e) / np.abs(a)) * 100.0)


def default_max_k(n: int) -> int:
    """Default ceiling for sampled neighbor counts: min(floor(0.4 n), 50)."""
    return min(math.floor(n * MAX_K_FRACTION), MAX_K_CAP)


def sample_grid(config: TuningConfig, n: int) -> tuple[HyperParams, ...]:
    """Draw ``config.grid_len`` hyperparameter sets for a series of length ``n``.

    Each row has k uniform on [1, K_max] (K_max from ``config.max_k`` or
    the :func:`default_max_k` of the full series length) and a weight
    triple of three uniform(0, 1) draws divided by their sum. The same
    seed reproduces the same grid.
    """
    if n < 3:
        raise ValueError(f"series length must be >= 3 to tune, got {n}")
    k_max = config.max_k if config.max_k is not None else default_max_k(n)
    if k_max < 1:
        raise ValueError(f"neighbor ceiling must be >= 1, got {k_max}")
    rng = np.random.default_rng(config.seed)
    ks = rng.integers(1, k_max + 1, size=config.grid_len)
    raw = rng.random((config.grid_len, 3))
    weights = raw / raw.sum(axis=1, keepdims=True)
    return tuple(
        HyperParams(k=int(ks[i]), alpha=weights[i, 0], beta=weights[i, 1],
                    gamma=weights[i, 2])
        for i in range(config.grid_len)
    )


def _component_values(sim, n: int, label: str) -> np.ndarray:
    v = sim.values if isinstance(sim, SimilarityMatrix) else np.asarray(sim, dtype=float)
    if v.shape != (n, n):
        raise LengthMismatch(f"{label} must be {n} x {n}, got {v.shape}")
    return v


def random_search_tune(st, sp, sx, y, config: TuningConfig, jobs: int = 1) -> TuningReport:
    """Run the random-search sweep and report the best hyperparameter set.

    Parameters
    ----------
    st, sp, sx : SimilarityMatrix or ndarray
        Component similarity matrices over the full series (n x n).
    y : array_like
        Full response series, validation holdout included.
    config : TuningConfig
    jobs : int, optional
        Worker threads for grid evaluation. Results are identical for any
        job count.

    For each sampled row, the weighted matrix is formed from the component
    matrices truncated to the working length m = n - val_holdout_len and a
    forecast of the final ``test_h`` of those m points is scored by MAPE.
    A row whose k exceeds the truncated candidate pool scores +inf instead
    of failing the sweep. Ties for the minimum go to the earliest row.

    Raises
    ------
    ZeroActual
        If any test-window actual is 0 (shift or rescale the series).
    ValueError
        If the window layout needs more points than the series has
        (test_h + val_holdout_len must be at most n - 2).
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    st_v = _component_values(st, n, "St")
    sp_v = _component_values(sp, n, "Sp")
    sx_v = _component_values(sx, n, "Sx")
    if config.test_h + config.val_holdout_len > n - 2:
        raise ValueError(
            f"test_h + val_holdout_len must be at most n - 2 = {n - 2}, "
            f"got {config.test_h + config.val_holdout_len}"
        )
    m = n - config.val_holdout_len
    test_index = np.arange(m - config.test_h + 1, m + 1, dtype=np.int64)
    actuals = y[test_index - 1]
    if np.any(actuals == 0.0):
        raise ZeroActual(
            "a test-window actual is 0, so percent error is undefined; "
            "shift or rescale the series before tuning"
        )

    grid = sample_grid(config, n)
    st_m, sp_m, sx_m = st_v[:m, :m], sp_v[:m, :m], sx_v[:m, :m]
    y_m = y[:m]

    def score(row: HyperParams) -> float:
        w = WeightTriple(row.alpha, row.beta, row.gamma)
        sw = combine_components(st_m, sp_m, sx_m, w)
        try:
            est = forecast_estimates(sw, test_index, row.k, y_m)
        except KTooLarge:
            return float("inf")
        return mape(actuals, est)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            mape_all = np.fromiter(pool.map(score, grid), dtype=float, count=len(grid))
    else:
        mape_all = np.fromiter(map(score, grid), dtype=float, count=len(grid))

    best = int(np.argmin(mape_all))
    weight_opt = WeightTriple(grid[best].alpha, grid[best].beta, grid[best].gamma)
    sw_opt = SimilarityMatrix("Sw", combine_components(st_v, sp_v, sx_v, weight_opt))
    return TuningReport(
        weight_opt=weight_opt,
        k_opt=grid[best].k,
        test_mape=float(mape_all[best]),
        mape_all=mape_all,
        grid=grid,
        sw_opt=sw_opt,
    )

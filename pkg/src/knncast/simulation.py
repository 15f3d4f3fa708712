"""Synthetic benchmark series with every random component recorded.

Four families of series share one additive recipe: a constant, a
predictor-driven term, a sinusoidal seasonal effect, an integrated ARMA
error for serial correlation, and an extra noise term that is normal or
Poisson (the Poisson branch injects right skew). The families differ only
in the predictor term:

* ``mvnorm_x``: a linear combination of d correlated normal predictors
* ``lin_to_sqrt``: one predictor, linear below a breakpoint, sqrt above
* ``lin_coef_chng``: one predictor, slope changes at the breakpoint
* ``quad_to_cubic``: one predictor, quadratic below, negated cubic above

Every draw is made on a single seeded generator (numpy ``default_rng``,
PCG64) in a fixed order, so a seed pins the entire series and all of its
components. Batch generation across seeds is embarrassingly parallel;
each run owns its generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import InvalidBreakpoint, InvalidCoefficients
from .core import derive_default_index

FAMILIES = ("mvnorm_x", "lin_to_sqrt", "lin_coef_chng", "quad_to_cubic")
PIECEWISE_FAMILIES = ("lin_to_sqrt", "lin_coef_chng", "quad_to_cubic")
SEASONAL_PERIOD_CHOICES = (4, 7, 12)

# Points generated and discarded before the retained ARMA sample, so the
# series forgets its zero initialization; ample for orders <= 2 with
# stationarity-constrained coefficients.
ARMA_BURN_IN = 200

MIN_SQRT_BREAKPOINT = 0.001


@dataclass(frozen=True)
class SimulationConfig:
    """Settings for one simulated series."""

    n: int
    seed: int
    family: str
    d: int = 3

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if int(self.n) < 30:
            raise ValueError(f"n must be >= 30, got {self.n}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        if int(self.d) < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "d", int(self.d))


@dataclass(frozen=True)
class SimulatedSeries:
    """One generated series plus every random component behind it.

    Fields not used by the generating family are None: ``b`` and
    ``sigma_corr`` belong to mvnorm_x; ``mu_x``, ``sigma_x``, ``bp`` and
    the slope coefficients belong to the piecewise families.
    """

    config: SimulationConfig
    y: np.ndarray
    X: np.ndarray
    c: float
    b: np.ndarray | None
    beta_sin: float
    beta_cos: float
    s: int
    arima_orders: tuple[int, int, int]
    phi: np.ndarray
    theta: np.ndarray
    eta: np.ndarray
    noise_family: str
    noise_param: float
    epsilon: np.ndarray
    mu_x: float | None
    sigma_x: float | None
    m: float | None
    m1: float | None
    m2: float | None
    bp: float | None
    sigma_corr: np.ndarray | None


def _check_arma_coefficients(coefs: np.ndarray, what: str) -> None:
    order = coefs.shape[0]
    if order == 0:
        return
    if order == 1:
        if not abs(coefs[0]) < 1.0:
            raise InvalidCoefficients(f"{what} coefficient must satisfy |c| < 1, got {coefs[0]}")
        return
    if order == 2:
        c1, c2 = coefs
        if not (abs(c2) < 1.0 and c2 + c1 < 1.0 and c2 - c1 < 1.0):
            raise InvalidCoefficients(
                f"{what} pair ({c1}, {c2}) violates the order-2 triangle constraints"
            )
        return
    raise InvalidCoefficients(f"{what} order must be at most 2, got {order}")


def sample_arma_coefficients(order: int, rng: np.random.Generator) -> np.ndarray:
    """Draw stationarity/invertibility-safe coefficients for one process.

    Order 0 yields an empty vector; order 1 a single uniform(-1, 1) draw;
    order 2 rejection-samples uniform(-1, 1) pairs until the triangle
    constraints hold (|c2| < 1, c2 + c1 < 1, c2 - c1 < 1).
    """
    if order not in (0, 1, 2):
        raise InvalidCoefficients(f"order must be in {{0, 1, 2}}, got {order}")
    if order == 0:
        return np.empty(0)
    if order == 1:
        return rng.uniform(-1.0, 1.0, size=1)
    while True:
        c1, c2 = rng.uniform(-1.0, 1.0, size=2)
        if abs(c2) < 1.0 and c2 + c1 < 1.0 and c2 - c1 < 1.0:
            return np.array([c1, c2])


def simulate_arma_error(orders, phi, theta, n: int, rng: np.random.Generator) -> np.ndarray:
    """Simulate an integrated ARMA error term of length ``n``.

    Runs an ARMA(p, q) recursion over ``n`` + burn-in standard-normal
    innovations, discards the burn-in, then cumulative-sums the remainder
    d times. With orders (0, 0, 0) the output is the raw innovation
    sequence.
    """
    p_order, d_order, q_order = (int(o) for o in orders)
    for o in (p_order, d_order, q_order):
        if o not in (0, 1, 2):
            raise InvalidCoefficients(f"orders must be in {{0, 1, 2}}, got {orders}")
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if phi.shape[0] != p_order or theta.shape[0] != q_order:
        raise InvalidCoefficients(
            f"coefficient lengths {phi.shape[0]}, {theta.shape[0]} do not match "
            f"orders ({p_order}, {q_order})"
        )
    _check_arma_coefficients(phi, "AR")
    _check_arma_coefficients(theta, "MA")
    innovations = rng.standard_normal(n + ARMA_BURN_IN)
    if p_order == 0 and q_order == 0:
        arma = innovations
    else:
        arma = signal.lfilter(
            np.concatenate(([1.0], theta)), np.concatenate(([1.0], -phi)), innovations
        )
    out = arma[ARMA_BURN_IN:]
    for _ in range(d_order):
        out = np.cumsum(out)
    return out


def random_correlation_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """A random d x d correlation matrix: symmetric, unit diagonal, positive definite.

    Normalizes a random Gram matrix G G^T with G drawn d x (d + 2)
    standard normal; a tiny ridge is added first in the (numerically
    negligible) event the Gram matrix is near-singular.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    g = rng.standard_normal((d, d + 2))
    gram = g @ g.T
    if np.linalg.eigvalsh(gram)[0] < 1e-10:
        gram = gram + 1e-8 * np.eye(d)
    scale = 1.0 / np.sqrt(np.diagonal(gram))
    corr = gram * scale[:, None] * scale[None, :]
    corr = (corr + corr.T) / 2.0
    np.fill_diagonal(corr, 1.0)
    return corr


def piecewise_fx(x, family: str, m: float | None = None, m1: float | None = None,
                 m2: float | None = None, bp: float | None = None):
    """Evaluate a piecewise predictor-response function at ``x``.

    * lin_to_sqrt: m * x below the breakpoint, sqrt(x) at or above it
      (the breakpoint must be at least 0.001 so sqrt is defined)
    * lin_coef_chng: m1 * x below, m2 * x at or above
    * quad_to_cubic: m * x**2 below, -m * x**3 at or above

    Accepts a scalar or an array; returns the same shape.
    """
    if family not in PIECEWISE_FAMILIES:
        raise ValueError(f"family must be one of {PIECEWISE_FAMILIES}, got {family!r}")
    if bp is None:
        raise InvalidBreakpoint(f"{family} requires a breakpoint")
    bp = float(bp)
    xv = np.asarray(x, dtype=float)
    below = xv < bp
    if family == "lin_to_sqrt":
        if m is None:
            raise ValueError("lin_to_sqrt requires m")
        if bp < MIN_SQRT_BREAKPOINT:
            raise InvalidBreakpoint(
                f"lin_to_sqrt breakpoint must be >= {MIN_SQRT_BREAKPOINT}, got {bp}"
            )
        out = np.where(below, float(m) * xv, np.sqrt(np.where(below, 0.0, xv)))
    elif family == "lin_coef_chng":
        if m1 is None or m2 is None:
            raise ValueError("lin_coef_chng requires m1 and m2")
        out = np.where(below, float(m1) * xv, float(m2) * xv)
    else:  # quad_to_cubic
        if m is None:
            raise ValueError("quad_to_cubic requires m")
        out = np.where(below, float(m) * xv * xv, -float(m) * xv ** 3)
    return float(out) if np.isscalar(x) else out


def assemble_response(c: float, signal_term, beta_sin: float, beta_cos: float,
                      s: int, eta, epsilon) -> np.ndarray:
    """Add up the response components for time orders 1..n.

    y_t = c + signal_t + beta_sin sin(2 pi t / s) + beta_cos cos(2 pi t / s)
          + eta_t + epsilon_t
    """
    signal_term = np.asarray(signal_term, dtype=float)
    n = signal_term.shape[0]
    t = np.arange(1, n + 1, dtype=float)
    angle = 2.0 * np.pi * t / float(s)
    return (c + signal_term + beta_sin * np.sin(angle) + beta_cos * np.cos(angle)
            + np.asarray(eta, dtype=float) + np.asarray(epsilon, dtype=float))


def simulate_series(config: SimulationConfig) -> SimulatedSeries:
    """Generate one series with all of its random components recorded.

    Component draws, in order: the constant c uniform on [-20, 20]; the
    predictors (correlation matrix then correlated normals for mvnorm_x;
    mu_x, sigma_x then one normal predictor for the piecewise families);
    the predictor-term coefficients and breakpoint; the seasonal period s
    from {4, 7, 12} and the two sinusoid coefficients uniform on [-5, 5];
    the three integrated-ARMA orders from {0, 1, 2} with their
    coefficients; the error innovations; and last the extra noise (fair
    coin between normal and Poisson, parameter uniform on [0.1, 20],
    Poisson draws added as-is).
    """
    rng = np.random.default_rng(config.seed)
    n = config.n

    c = float(rng.uniform(-20.0, 20.0))

    b = mu_x = sigma_x = m = m1 = m2 = bp = sigma_corr = None
    if config.family == "mvnorm_x":
        sigma_corr = random_correlation_matrix(config.d, rng)
        # lower-triangular factor maps iid normals to the target covariance
        chol = np.linalg.cholesky(sigma_corr)
        X = rng.standard_normal((n, config.d)) @ chol.T
        b = rng.uniform(-5.0, 5.0, size=config.d)
        signal_term = X @ b
    else:
        mu_x = float(rng.uniform(-5.0, 5.0))
        sigma_x = float(rng.uniform(0.001, 10.0))
        x = rng.normal(mu_x, sigma_x, size=n)
        X = x.reshape(-1, 1)
        if config.family == "lin_to_sqrt":
            m = float(rng.uniform(-5.0, 5.0))
            bp = max(float(rng.uniform(mu_x - sigma_x, mu_x + sigma_x)), MIN_SQRT_BREAKPOINT)
            signal_term = piecewise_fx(x, "lin_to_sqrt", m=m, bp=bp)
        elif config.family == "lin_coef_chng":
            m1 = float(rng.uniform(-5.0, 5.0))
            m2 = float(rng.uniform(-5.0, 5.0))
            bp = float(rng.uniform(mu_x - sigma_x, mu_x + sigma_x))
            signal_term = piecewise_fx(x, "lin_coef_chng", m1=m1, m2=m2, bp=bp)
        else:  # quad_to_cubic
            m = float(rng.uniform(-5.0, 5.0))
            bp = float(rng.uniform(mu_x - sigma_x, mu_x + sigma_x))
            signal_term = piecewise_fx(x, "quad_to_cubic", m=m, bp=bp)

    s = int(rng.choice(SEASONAL_PERIOD_CHOICES))
    beta_sin = float(rng.uniform(-5.0, 5.0))
    beta_cos = float(rng.uniform(-5.0, 5.0))

    orders = tuple(int(o) for o in rng.integers(0, 3, size=3))
    phi = sample_arma_coefficients(orders[0], rng)
    theta = sample_arma_coefficients(orders[2], rng)
    eta = simulate_arma_error(orders, phi, theta, n, rng)

    if rng.random() < 0.5:
        noise_family = "poisson"
        noise_param = float(rng.uniform(0.1, 20.0))
        epsilon = rng.poisson(noise_param, size=n).astype(float)
    else:
        noise_family = "normal"
        noise_param = float(rng.uniform(0.1, 20.0))
        epsilon = rng.normal(0.0, noise_param, size=n)

    y = assemble_response(c, signal_term, beta_sin, beta_cos, s, eta, epsilon)
    return SimulatedSeries(
        config=config, y=y, X=X, c=c, b=b, beta_sin=beta_sin, beta_cos=beta_cos,
        s=s, arima_orders=orders, phi=phi, theta=theta, eta=eta,
        noise_family=noise_family, noise_param=noise_param, epsilon=epsilon,
        mu_x=mu_x, sigma_x=sigma_x, m=m, m1=m1, m2=m2, bp=bp, sigma_corr=sigma_corr,
    )


def series_index(sim: SimulatedSeries) -> tuple[np.ndarray, np.ndarray]:
    """Time orders 1..n and cyclic periods 1..s for a simulated series."""
    return derive_default_index(sim.config.n, sim.s)

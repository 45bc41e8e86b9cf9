"""Two-component Weibull mixture distribution.

Density, distribution function, quantile, parameter derivatives and
sampling for the five-parameter family on x > 0

    F(x) = p * (1 - exp(-(x/beta1)**alpha1))
         + (1 - p) * (1 - exp(-(x/beta2)**alpha2))

with shapes alpha1, alpha2 > 0, scales beta1, beta2 > 0 and mixing
proportion p in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "MixtureParams",
    "Sample",
    "GradF",
    "mixture_pdf",
    "mixture_cdf",
    "mixture_quantile",
    "cdf_gradient",
    "sample_mixture",
    "DEFAULT_QUANTILE_EPS",
]

#: Default stopping width for quantile inversion.
DEFAULT_QUANTILE_EPS = 5e-6

_MAX_SECANT_ITER = 200
_MAX_BISECT_ITER = 300
# Residual threshold paired with the step-width stopping rule so the
# returned point also satisfies |F(x) - t| well below the round-trip budget.
_RESIDUAL_TOL = 1e-10
# Beyond exp(709) the power (x/beta)**alpha overflows a double; the survival
# factor exp(-(x/beta)**alpha) underflows to zero much earlier, so every term
# carrying it is exactly zero there.
_EXP_OVERFLOW = 709.0


@dataclass(frozen=True)
class MixtureParams:
    """Parameter vector (alpha1, alpha2, beta1, beta2, p) of the mixture.

    Components are kept in a canonical order (beta1 <= beta2, ties broken
    by alpha1 <= alpha2) so that the two relabelings of the same mixture
    compare equal; the constructor swaps components, and the mixing
    proportion with them, when needed.
    """

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    p: float

    def __post_init__(self) -> None:
        vals = {}
        for name in ("alpha1", "alpha2", "beta1", "beta2", "p"):
            vals[name] = float(getattr(self, name))
            object.__setattr__(self, name, vals[name])
        if not all(math.isfinite(v) for v in vals.values()):
            raise DomainError("mixture parameters must be finite")
        if min(self.alpha1, self.alpha2, self.beta1, self.beta2) <= 0.0:
            raise DomainError("shape and scale parameters must be strictly positive")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError("mixing proportion must lie in [0, 1]")
        if (self.beta1, self.alpha1) > (self.beta2, self.alpha2):
            a1, b1, a2, b2 = self.alpha2, self.beta2, self.alpha1, self.beta1
            object.__setattr__(self, "alpha1", a1)
            object.__setattr__(self, "beta1", b1)
            object.__setattr__(self, "alpha2", a2)
            object.__setattr__(self, "beta2", b2)
            object.__setattr__(self, "p", 1.0 - self.p)

    def as_array(self) -> np.ndarray:
        """Parameters as the array (alpha1, alpha2, beta1, beta2, p)."""
        return np.array([self.alpha1, self.alpha2, self.beta1, self.beta2, self.p])

    @classmethod
    def from_array(cls, arr) -> "MixtureParams":
        a1, a2, b1, b2, p = np.asarray(arr, dtype=float)
        return cls(a1, a2, b1, b2, p)


@dataclass(frozen=True, eq=False)
class Sample:
    """An ordered batch of strictly positive observations.

    Values are sorted ascending on construction. ``label`` carries free-form
    provenance (file name, generator seed, ...) and plays no numeric role.
    """

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise DomainError("sample must contain at least one observation")
        if not np.all(np.isfinite(v)):
            raise DomainError("sample values must be finite")
        if v[0] <= 0.0:
            raise DomainError("sample values must be strictly positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GradF:
    """Partial derivatives of the mixture CDF at one point, by parameter."""

    d_alpha1: float
    d_alpha2: float
    d_beta1: float
    d_beta2: float
    d_p: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_alpha1, self.d_alpha2, self.d_beta1, self.d_beta2, self.d_p])


def _as_positive(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("x must be strictly positive and finite")
    return arr


def _weibull_logpower(x: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    """alpha * log(x / beta), the log of u = (x/beta)**alpha."""
    return alpha * np.log(x / beta)


def mixture_pdf(x, theta: MixtureParams):
    """Mixture density p*f1 + (1-p)*f2 at x > 0.

    Accepts a scalar or an array; returns a float for scalar input.
    """
    arr = _as_positive(x)
    with np.errstate(over="ignore", under="ignore"):
        d = theta.p * _weibull_pdf(arr, theta.alpha1, theta.beta1) + (
            1.0 - theta.p
        ) * _weibull_pdf(arr, theta.alpha2, theta.beta2)
    return float(d) if np.ndim(x) == 0 else d


def _weibull_pdf(x: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    logx = np.log(x / beta)
    u = np.exp(alpha * logx)
    return (alpha / beta) * np.exp((alpha - 1.0) * logx - u)


def mixture_cdf(x, theta: MixtureParams):
    """Mixture distribution function at x > 0.

    Accepts a scalar or an array; returns a float for scalar input.
    """
    arr = _as_positive(x)
    with np.errstate(over="ignore", under="ignore"):
        c = theta.p * _weibull_cdf(arr, theta.alpha1, theta.beta1) + (
            1.0 - theta.p
        ) * _weibull_cdf(arr, theta.alpha2, theta.beta2)
    return float(c) if np.ndim(x) == 0 else c


def _weibull_cdf(x: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    u = np.exp(_weibull_logpower(x, alpha, beta))
    return -np.expm1(-u)


def _cdf_scalar(x: float, theta: MixtureParams) -> float:
    with np.errstate(over="ignore", under="ignore"):
        return theta.p * float(_weibull_cdf(np.float64(x), theta.alpha1, theta.beta1)) + (
            1.0 - theta.p
        ) * float(_weibull_cdf(np.float64(x), theta.alpha2, theta.beta2))


def mixture_quantile(
    t: float,
    theta: MixtureParams,
    eps: float = DEFAULT_QUANTILE_EPS,
    max_iter: int = _MAX_SECANT_ITER,
) -> float:
    """Invert the mixture CDF at t in (0, 1) by the secant method.

    The single-component quantiles beta_i * (-log(1-t))**(1/alpha_i) start
    the iteration; in practice they bracket the root. Iteration stops once
    two consecutive points are within ``eps`` and the residual is
    negligible. If the secant cycles or leaves (0, inf), a bisection on a
    geometrically grown bracket finishes the job.
    """
    t = float(t)
    if not math.isfinite(t) or not 0.0 < t < 1.0:
        raise DomainError("quantile level t must lie strictly inside (0, 1)")
    if eps <= 0.0:
        raise DomainError("eps must be positive")

    def g(x: float) -> float:
        return _cdf_scalar(x, theta) - t

    w = -math.log1p(-t)
    x0 = theta.beta1 * w ** (1.0 / theta.alpha1)
    x1 = theta.beta2 * w ** (1.0 / theta.alpha2)
    if x0 == x1:
        x1 = x0 * (1.0 + 1e-6)

    a, b = x0, x1
    ga, gb = g(a), g(b)
    for _ in range(max_iter):
        if gb == ga:
            break
        c = (a * gb - b * ga) / (gb - ga)
        if not math.isfinite(c) or c <= 0.0:
            break
        gc = g(c)
        if abs(c - b) < eps and abs(gc) < _RESIDUAL_TOL:
            return c
        a, ga = b, gb
        b, gb = c, gc
    return _bisect_quantile(g, x0, x1, eps)


def _bisect_quantile(g, x0: float, x1: float, eps: float) -> float:
    lo, hi = min(x0, x1), max(x0, x1)
    glo, ghi = g(lo), g(hi)
    for _ in range(_MAX_BISECT_ITER):
        if glo <= 0.0:
            break
        hi, ghi = lo, glo
        lo *= 0.5
        glo = g(lo)
    else:
        raise ConvergenceError("could not bracket the quantile from below")
    for _ in range(_MAX_BISECT_ITER):
        if ghi >= 0.0:
            break
        lo, glo = hi, ghi
        hi *= 2.0
        ghi = g(hi)
    else:
        raise ConvergenceError("could not bracket the quantile from above")
    mid = 0.5 * (lo + hi)
    for _ in range(_MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break  # bracket is at floating-point resolution
        gm = g(mid)
        if gm < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < eps and abs(gm) <= _RESIDUAL_TOL:
            return mid
    if abs(g(mid)) <= 1e-8:
        return mid
    raise ConvergenceError("quantile inversion did not converge")


def cdf_gradient(x: float, theta: MixtureParams) -> GradF:
    """Gradient of the mixture CDF with respect to all five parameters.

    With u_i = (x/beta_i)**alpha_i and weights p1 = p, p2 = 1 - p:

        dF/dalpha_i = p_i * u_i * log(x/beta_i) * exp(-u_i)
        dF/dbeta_i  = -p_i * (alpha_i/beta_i) * u_i * exp(-u_i)
        dF/dp       = exp(-u_2) - exp(-u_1)
    """
    xv = float(x)
    if not math.isfinite(xv) or xv <= 0.0:
        raise DomainError("x must be strictly positive and finite")
    da1, db1, e1 = _component_partials(xv, theta.alpha1, theta.beta1)
    da2, db2, e2 = _component_partials(xv, theta.alpha2, theta.beta2)
    p, q = theta.p, 1.0 - theta.p
    return GradF(p * da1, q * da2, p * db1, q * db2, e2 - e1)


def _component_partials(x: float, alpha: float, beta: float):
    """(dF/dalpha, dF/dbeta, survival) for one Weibull component, weight 1."""
    logx = math.log(x / beta)
    t = alpha * logx
    if t > _EXP_OVERFLOW:
        return 0.0, 0.0, 0.0
    u = math.exp(t)
    su = math.exp(-u)
    return u * logx * su, -(alpha / beta) * u * su, su


def sample_mixture(theta: MixtureParams, n: int, rng_seed: int, label: str = "") -> Sample:
    """Draw n independent observations from the mixture, sorted ascending.

    Each draw picks component 1 with probability p and inverts the
    component CDF as beta * (-log U)**(1/alpha). Deterministic for a fixed
    seed.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(rng_seed)
    take_first = rng.random(n) < theta.p
    u = rng.random(n)
    u[u == 0.0] = np.finfo(float).tiny  # keep -log(u) finite
    e = -np.log(u)
    draws = np.where(
        take_first,
        theta.beta1 * e ** (1.0 / theta.alpha1),
        theta.beta2 * e ** (1.0 / theta.alpha2),
    )
    return Sample(draws, label=label)

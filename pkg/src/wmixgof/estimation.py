"""Maximum-likelihood estimation of the two-component Weibull mixture.

Likelihood surfaces of Weibull mixtures are flat over wide regions and
often multimodal, so the fitter runs several deterministic and seeded
starting points. Each start alternates an EM update of the mixing
proportion with quasi-Newton steps on the log shapes and scales, then
polishes all five parameters jointly; positivity is enforced by working
in log coordinates with the mixing proportion on a logistic scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, gammaln, logit

from .errors import AllStartsFailed, DomainError, NonFiniteHessian, TooFewObservations
from .mixture_model import MixtureParams, Sample

__all__ = ["FitConfig", "FitResult", "log_likelihood", "fit_mle", "hessian_at"]

# Mixing proportions this close to {0, 1} disqualify a start: the
# composite-hypothesis kernel needs an interior, regular optimum.
_P_ADMISSIBLE = (0.001, 0.999)
# Looser band that merely flags a near-degenerate mixture in diagnostics.
_P_FLAG = (0.05, 0.95)
# Box for log shapes/scales and the logit proportion during optimization;
# wide enough for any plausible data scale, narrow enough to stop walks
# along flat likelihood ridges.
_ETA_BOUND = 12.0
_LOGIT_BOUND = 13.8
_EM_CYCLES = 4
_HUGE_NLL = 1e18


@dataclass(frozen=True)
class FitConfig:
    """Knobs of the multi-start fitter.

    ``tolerance`` scales with the sample size: the fit counts as converged
    when the score max-norm is below tolerance * n.
    """

    n_starts: int = 10
    tolerance: float = 1e-6
    max_iterations: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_starts < 1:
            raise DomainError("n_starts must be at least 1")
        if self.tolerance <= 0.0 or self.max_iterations < 1:
            raise DomainError("tolerance must be positive and max_iterations >= 1")


@dataclass(frozen=True, eq=False)
class FitResult:
    """Outcome of a multi-start maximum-likelihood fit.

    ``best_of_likelihoods`` lists the local optima of the admissible
    (interior) starts in start order; the reported ``log_likelihood`` is
    their maximum. Starts that ended on the mixing boundary are counted in
    ``n_boundary_starts`` instead. ``boundary_proximity`` flags a reported
    proportion outside [0.05, 0.95].
    """

    theta_hat: MixtureParams
    log_likelihood: float
    hessian: np.ndarray
    converged: bool
    n_starts_used: int
    best_of_likelihoods: list = field(default_factory=list)
    n_boundary_starts: int = 0
    boundary_proximity: bool = False


def _log_components(x: np.ndarray, th: np.ndarray):
    """Log component densities and their building blocks at parameter array th."""
    a1, a2, b1, b2, _ = th
    l1 = np.log(x / b1)
    l2 = np.log(x / b2)
    with np.errstate(over="ignore"):
        u1 = np.exp(a1 * l1)
        u2 = np.exp(a2 * l2)
    lf1 = math.log(a1 / b1) + (a1 - 1.0) * l1 - u1
    lf2 = math.log(a2 / b2) + (a2 - 1.0) * l2 - u2
    return lf1, lf2, u1, u2, l1, l2


def _logaddexp2way(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Elementwise log(exp(t1) + exp(t2)), tolerating -inf in both slots."""
    hi = np.maximum(t1, t2)
    with np.errstate(invalid="ignore"):
        out = hi + np.log1p(np.exp(-np.abs(t1 - t2)))
    return np.where(np.isfinite(hi), out, hi)


def _log_mixture_terms(x: np.ndarray, th: np.ndarray):
    lf1, lf2, u1, u2, l1, l2 = _log_components(x, th)
    p = th[4]
    lp = math.log(p) if p > 0.0 else -math.inf
    lq = math.log1p(-p) if p < 1.0 else -math.inf
    t1 = lp + lf1
    t2 = lq + lf2
    lse = _logaddexp2way(t1, t2)
    return lf1, lf2, t1, t2, lse, u1, u2, l1, l2


def _loglik(x: np.ndarray, th: np.ndarray) -> float:
    lse = _log_mixture_terms(x, th)[4]
    total = float(np.sum(lse))
    return total if math.isfinite(total) else -math.inf


def log_likelihood(theta: MixtureParams, sample: Sample) -> float:
    """Total log-likelihood of the sample, safeguarded against underflow.

    Per-point densities are assembled on the log scale (log-sum-exp over
    the two components); if a point's density still underflows to zero the
    function returns -inf rather than raising.
    """
    return _loglik(sample.values, theta.as_array())


def _masked_dot(w: np.ndarray, factor: np.ndarray) -> float:
    """sum(w * factor) treating w == 0 terms as exactly zero.

    Where a component density underflows the factor can be infinite while
    the weight is exactly zero; those terms contribute nothing.
    """
    out = 0.0
    mask = w > 0.0
    if np.any(mask):
        out = float(np.sum(w[mask] * factor[mask]))
    return out


def _score(x: np.ndarray, th: np.ndarray) -> np.ndarray:
    """Gradient of the total log-likelihood with respect to (a1, a2, b1, b2, p)."""
    lf1, lf2, t1, t2, lse, u1, u2, l1, l2 = _log_mixture_terms(x, th)
    a1, a2, b1, b2, _ = th
    with np.errstate(invalid="ignore"):
        w1 = np.exp(t1 - lse)  # responsibilities p*f1/f and (1-p)*f2/f
        w2 = np.exp(t2 - lse)
        r1 = np.exp(lf1 - lse)  # density ratios f1/f and f2/f
        r2 = np.exp(lf2 - lse)
    w1 = np.where(np.isfinite(w1), w1, 0.0)
    w2 = np.where(np.isfinite(w2), w2, 0.0)
    r1 = np.where(np.isfinite(r1), r1, 0.0)
    r2 = np.where(np.isfinite(r2), r2, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        ta1 = 1.0 / a1 + l1 * (1.0 - u1)
        tb1 = (a1 / b1) * (u1 - 1.0)
        ta2 = 1.0 / a2 + l2 * (1.0 - u2)
        tb2 = (a2 / b2) * (u2 - 1.0)
    g = np.empty(5)
    g[0] = _masked_dot(w1, ta1)
    g[1] = _masked_dot(w2, ta2)
    g[2] = _masked_dot(w1, tb1)
    g[3] = _masked_dot(w2, tb2)
    g[4] = float(np.sum(r1 - r2))
    return g


def _responsibility_mean(x: np.ndarray, th: np.ndarray) -> float:
    lf1, lf2, t1, t2, lse, *_ = _log_mixture_terms(x, th)
    with np.errstate(invalid="ignore"):
        w1 = np.exp(t1 - lse)
    w1 = np.where(np.isfinite(w1), w1, 0.5)
    return float(np.mean(w1))


def _to_eta(th: np.ndarray) -> np.ndarray:
    eta = np.empty(5)
    eta[:4] = np.log(th[:4])
    eta[4] = logit(min(max(th[4], 1e-6), 1.0 - 1e-6))
    return np.clip(eta, [-_ETA_BOUND] * 4 + [-_LOGIT_BOUND], [_ETA_BOUND] * 4 + [_LOGIT_BOUND])


def _from_eta(eta: np.ndarray) -> np.ndarray:
    th = np.empty(5)
    th[:4] = np.exp(eta[:4])
    th[4] = float(expit(eta[4]))
    return th


def _nll_eta(eta: np.ndarray, x: np.ndarray) -> tuple:
    th = _from_eta(eta)
    ll = _loglik(x, th)
    if not math.isfinite(ll):
        return _HUGE_NLL, np.zeros(5)
    g = _score(x, th)
    jac = np.concatenate([th[:4], [th[4] * (1.0 - th[4])]])
    return -ll, -g * jac


def _nll_eta4(eta4: np.ndarray, x: np.ndarray, p: float) -> tuple:
    th = np.concatenate([np.exp(eta4), [p]])
    ll = _loglik(x, th)
    if not math.isfinite(ll):
        return _HUGE_NLL, np.zeros(4)
    g = _score(x, th)
    return -ll, -(g[:4] * th[:4])


def _moment_weibull(x: np.ndarray) -> tuple:
    """Rough single-Weibull shape/scale from the first two moments."""
    m = float(np.mean(x))
    s = float(np.std(x))
    if s <= 0.0:
        alpha = 20.0
    else:
        alpha = float(np.clip((s / m) ** -1.086, 0.15, 60.0))
    beta = m / math.exp(gammaln(1.0 + 1.0 / alpha))
    return alpha, beta


def _starting_points(x: np.ndarray, config: FitConfig) -> list:
    n = x.size
    starts = []
    for q in (0.3, 0.5, 0.7):
        k = min(max(int(round(q * n)), 2), n - 2)
        a_lo, b_lo = _moment_weibull(x[:k])
        a_hi, b_hi = _moment_weibull(x[k:])
        starts.append(np.array([a_lo, a_hi, b_lo, b_hi, q]))
    a, b = _moment_weibull(x)
    starts.append(np.array([a, 1.5 * a, 0.75 * b, 1.25 * b, 0.5]))
    rng = np.random.default_rng(config.seed)
    while len(starts) < config.n_starts:
        base = starts[len(starts) % 4]
        jitter = np.exp(rng.normal(0.0, 0.35, size=4))
        pj = float(np.clip(base[4] + rng.normal(0.0, 0.15), 0.05, 0.95))
        starts.append(np.concatenate([base[:4] * jitter, [pj]]))
    return starts[: config.n_starts]


def _optimize_start(x: np.ndarray, theta0: np.ndarray, config: FitConfig) -> tuple:
    eta = _to_eta(theta0)
    bounds4 = [(-_ETA_BOUND, _ETA_BOUND)] * 4
    bounds5 = bounds4 + [(-_LOGIT_BOUND, _LOGIT_BOUND)]
    ll_prev = -math.inf
    for _ in range(_EM_CYCLES):
        p_new = min(max(_responsibility_mean(x, _from_eta(eta)), 1e-6), 1.0 - 1e-6)
        eta[4] = float(logit(p_new))
        res = minimize(
            _nll_eta4,
            eta[:4],
            args=(x, p_new),
            jac=True,
            method="L-BFGS-B",
            bounds=bounds4,
            options={"maxiter": 25, "ftol": 1e-12},
        )
        eta[:4] = res.x
        ll = -float(res.fun)
        if ll - ll_prev <= 1e-9 * (1.0 + abs(ll)):
            break
        ll_prev = ll
    res = minimize(
        _nll_eta,
        eta,
        args=(x,),
        jac=True,
        method="L-BFGS-B",
        bounds=bounds5,
        options={"maxiter": config.max_iterations, "ftol": 1e-13, "gtol": 1e-9},
    )
    th = _from_eta(res.x)
    return th, -float(res.fun)


def fit_mle(sample: Sample, config: FitConfig | None = None) -> FitResult:
    """Best interior local maximum of the likelihood over all starts.

    Raises TooFewObservations below 20 points and AllStartsFailed when
    every start diverged or finished with the mixing proportion outside
    [0.001, 0.999]. Deterministic for a fixed (sample, config) pair.
    """
    config = config or FitConfig()
    if sample.n < 20:
        raise TooFewObservations(
            f"need at least 20 observations for a five-parameter fit, got {sample.n}"
        )
    x = sample.values
    starts = _starting_points(x, config)
    admissible = []
    n_boundary = 0
    for theta0 in starts:
        th, ll = _optimize_start(x, theta0, config)
        if not math.isfinite(ll):
            n_boundary += 1
            continue
        if _P_ADMISSIBLE[0] <= th[4] <= _P_ADMISSIBLE[1]:
            admissible.append((th, ll))
        else:
            n_boundary += 1
    if not admissible:
        raise AllStartsFailed(
            f"all {len(starts)} starts diverged or ended on the mixing boundary"
        )
    th_best, ll_best = max(admissible, key=lambda item: item[1])
    theta_hat = MixtureParams.from_array(th_best)
    grad = _score(x, theta_hat.as_array())
    converged = bool(np.max(np.abs(grad)) < config.tolerance * sample.n)
    hess = hessian_at(theta_hat, sample)
    return FitResult(
        theta_hat=theta_hat,
        log_likelihood=ll_best,
        hessian=hess,
        converged=converged,
        n_starts_used=len(starts),
        best_of_likelihoods=[ll for _, ll in admissible],
        n_boundary_starts=n_boundary,
        boundary_proximity=not (_P_FLAG[0] <= theta_hat.p <= _P_FLAG[1]),
    )


def hessian_at(theta: MixtureParams, sample: Sample) -> np.ndarray:
    """Hessian of the total log-likelihood at theta.

    Central finite differences of the analytic score, step
    h_j = max(1e-5, 1e-5 * |theta_j|) per coordinate (shrunk if needed to
    stay inside the parameter space), symmetrized.
    """
    if not 0.0 < theta.p < 1.0:
        raise DomainError("Hessian requires an interior mixing proportion")
    x = sample.values
    th = theta.as_array()
    h = np.maximum(1e-5, 1e-5 * np.abs(th))
    h[:4] = np.minimum(h[:4], 0.49 * th[:4])
    h[4] = min(h[4], 0.49 * min(theta.p, 1.0 - theta.p))
    hess = np.empty((5, 5))
    for j in range(5):
        tp = th.copy()
        tm = th.copy()
        tp[j] += h[j]
        tm[j] -= h[j]
        hess[:, j] = (_score(x, tp) - _score(x, tm)) / (2.0 * h[j])
    if not np.all(np.isfinite(hess)):
        raise NonFiniteHessian("a second-derivative entry is not finite")
    return 0.5 * (hess + hess.T)

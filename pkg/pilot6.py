import time

import numpy as np
from scipy.integrate import quad

from wmixgof import (
    FitConfig,
    Sample,
    WeightedChiSquare,
    benchmark_populations,
    build_q_matrix,
    cvm_statistic,
    eigen_spectrum,
    fit_mle,
    imhof_tail,
    log_likelihood,
    mixture_pdf,
    mixture_quantile,
    pit,
    sample_mixture,
)

pops = benchmark_populations()

print("== lognormal misfit power, n=500 ==")
hits = 0
for s in range(5):
    rng = np.random.default_rng(900 + s)
    data = np.exp(rng.normal(0.0, 1.0, size=500))
    sm = Sample(data)
    t0 = time.time()
    fit = fit_mle(sm, FitConfig(seed=s))
    w2 = cvm_statistic(pit(sm, fit.theta_hat))
    q = build_q_matrix(fit.theta_hat, fit.hessian, sm.n, 200)
    spec = eigen_spectrum(q)
    p = imhof_tail(WeightedChiSquare(spec.retained), w2)
    print(f"seed {900+s}: w2={w2:.4f} p={p:.5f}  [{time.time()-t0:.2f}s]")
    hits += p < 0.05
print("rejections:", hits, "/ 5")

print("== ll quadrature oracle, pop 1, n=200 ==")
th = pops[0].theta
hi = mixture_quantile(1 - 1e-10, th)
mean_lf, _ = quad(lambda x: mixture_pdf(x, th) * np.log(mixture_pdf(x, th)), 0, hi, limit=200)
second, _ = quad(lambda x: mixture_pdf(x, th) * np.log(mixture_pdf(x, th)) ** 2, 0, hi, limit=200)
var_lf = second - mean_lf**2
print("E[lnf] =", mean_lf, "SD[lnf] =", np.sqrt(var_lf))
for s in [314, 315, 316]:
    sm = sample_mixture(th, 200, rng_seed=s)
    ll = log_likelihood(th, sm)
    zscore = (ll - 200 * mean_lf) / np.sqrt(200 * var_lf)
    print(f"seed {s}: ll={ll:.2f} expected={200*mean_lf:.2f} z={zscore:.2f}")

print("== pop 4 fit for pit example, n=200 ==")
sm = sample_mixture(pops[3].theta, 200, rng_seed=404)
fit = fit_mle(sm, FitConfig(seed=4))
z = pit(sm, fit.theta_hat)
print("theta_hat:", np.round(fit.theta_hat.as_array(), 3), "z in (0,1):", bool(z.z[0] > 0 and z.z[-1] < 1))

print("== fits for pops 1-3 n=300 (session fixtures) ==")
for i in (0, 1, 2):
    t0 = time.time()
    sm = sample_mixture(pops[i].theta, 300, rng_seed=201 + i)
    fit = fit_mle(sm, FitConfig(seed=21 + i))
    info = -fit.hessian / sm.n
    ev = np.linalg.eigvalsh(info)
    print(f"pop {i+1}: t={time.time()-t0:.2f}s conv={fit.converged} p={fit.theta_hat.p:.3f} "
          f"min info eig={ev[0]:.5f} diag H neg={bool(np.all(np.diag(fit.hessian) < 0))}")

import time

import numpy as np

from wmixgof import (
    FitConfig,
    WeightedChiSquare,
    benchmark_populations,
    build_q_matrix,
    cvm_statistic,
    eigen_spectrum,
    fit_mle,
    imhof_tail,
    log_likelihood,
    pit,
    sample_mixture,
)

pops = benchmark_populations()

print("== fit pop 5, n=1000 ==")
truth = pops[4].theta
sample = sample_mixture(truth, 1000, rng_seed=42)
t0 = time.time()
fit = fit_mle(sample, FitConfig(seed=7))
dt = time.time() - t0
print("time:", dt)
print("truth:", truth.as_array())
print("est:  ", fit.theta_hat.as_array())
print("abs err:", np.abs(fit.theta_hat.as_array() - truth.as_array()))
print("converged:", fit.converged, "ll:", fit.log_likelihood, "boundary starts:", fit.n_boundary_starts)
print("ll(true):", log_likelihood(truth, sample))

print("== hessian diagnostics ==")
H = fit.hessian
print("diag:", np.diag(H))
info = -H / sample.n
print("info eigvals:", np.linalg.eigvalsh(info))

print("== kernel build m=500 ==")
t0 = time.time()
q = build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 500)
spec = eigen_spectrum(q)
dt = time.time() - t0
print("time:", dt)
print("n_retained:", spec.n_retained, "trace_captured:", spec.trace_captured,
      "n_negative:", spec.n_negative, "min eig:", spec.min_eigenvalue)
print("first 5 lambdas:", spec.lambdas[:5])

w2 = cvm_statistic(pit(sample, fit.theta_hat))
t0 = time.time()
p = imhof_tail(WeightedChiSquare(spec.retained), w2)
print("w2:", w2, "p:", p, f"[imhof {time.time()-t0:.3f}s]")

print("== fit pop 1, n=100 timing (sim loop cost) ==")
th1 = pops[0].theta
times = []
for s in range(5):
    sm = sample_mixture(th1, 100, rng_seed=100 + s)
    t0 = time.time()
    f = fit_mle(sm, FitConfig(seed=s))
    times.append(time.time() - t0)
print("fit times:", [f"{t:.2f}" for t in times], "mean:", np.mean(times))

t0 = time.time()
q = build_q_matrix(f.theta_hat, f.hessian, 100, 200)
spec = eigen_spectrum(q)
p = imhof_tail(WeightedChiSquare(spec.retained), 0.05)
print(f"kernel m=200 + eigen + imhof: {time.time()-t0:.3f}s; n_retained={spec.n_retained}, n_neg={spec.n_negative}")

import time

import numpy as np
from scipy.stats import chi2

from wmixgof import (
    MixtureParams,
    WeightedChiSquare,
    benchmark_populations,
    brownian_bridge_q,
    cdf_gradient,
    eigen_spectrum,
    imhof_tail,
    mixture_cdf,
    mixture_quantile,
    simple_hypothesis_lambdas,
    ad_uniformity_pvalue,
    ad_statistic_uniform,
)

pops = [p.theta for p in benchmark_populations()]

print("== Brownian bridge eigenvalues, m=500 ==")
t0 = time.time()
spec = eigen_spectrum(brownian_bridge_q(500), tail_tolerance=0.0)
exact = simple_hypothesis_lambdas(10)
rel = np.abs(spec.lambdas[:10] - exact) / exact
print("rel err j=1..10:", rel)
print("max rel err:", rel.max(), "time:", time.time() - t0)

print("== Imhof single weight ==")
for lam, x in [(1.0, chi2.isf(0.05, 1)), (2.0, 2 * chi2.isf(0.05, 1))]:
    t0 = time.time()
    p = imhof_tail(WeightedChiSquare([lam]), x)
    print(f"lam={lam} x={x:.6f} -> {p:.7f} (want 0.05)  [{time.time()-t0:.3f}s]")

print("== Imhof vs chi2 grid (single weight) ==")
for x in [0.1, 0.5, 1.0, 2.0, 5.0, 9.0]:
    p = imhof_tail(WeightedChiSquare([1.0]), x)
    print(f"x={x}: imhof={p:.8f} chi2={chi2.sf(x,1):.8f} diff={abs(p-chi2.sf(x,1)):.2e}")

print("== Imhof CvM 5% point ==")
t0 = time.time()
p = imhof_tail(WeightedChiSquare(simple_hypothesis_lambdas(100)), 0.461)
print(f"P(W > 0.461) = {p:.6f} (want ~0.05)  [{time.time()-t0:.3f}s]")

print("== quantile round trips ==")
for i, th in enumerate(pops, 1):
    ts = np.linspace(0.01, 0.99, 99)
    errs = [abs(mixture_cdf(mixture_quantile(t, th), th) - t) for t in ts]
    print(f"pop {i}: max |cdf(q(t))-t| = {max(errs):.2e}")

print("== cdf_gradient vs FD, pop 2 ==")
th = pops[1]
h = 1e-6
names = ["alpha1", "alpha2", "beta1", "beta2", "p"]
worst = 0.0
for x in [0.5, 1.0, 2.0, 5.0]:
    g = cdf_gradient(x, th).as_array()
    for j, nm in enumerate(names):
        arr = th.as_array()
        ap, am = arr.copy(), arr.copy()
        ap[j] += h
        am[j] -= h
        fd = (mixture_cdf(x, MixtureParams.from_array(ap)) - mixture_cdf(x, MixtureParams.from_array(am))) / (2 * h)
        worst = max(worst, abs(g[j] - fd))
print("worst abs diff:", worst)

print("== AD sanity ==")
u = np.arange(1, 101) / 101.0
a2 = ad_statistic_uniform(u)
print(f"evenly spaced n=100: A2={a2:.4f} p={ad_uniformity_pvalue(a2):.4f}")
u = np.linspace(0.001, 0.099, 50)
a2c = ad_statistic_uniform(u)
print(f"clustered n=50: A2={a2c:.2f} p={ad_uniformity_pvalue(a2c):.2e}")
print("p(0.78) =", ad_uniformity_pvalue(0.78), " p(2.43) =", ad_uniformity_pvalue(2.43))
print("p(1.28) =", ad_uniformity_pvalue(1.28), " p(0.95) =", ad_uniformity_pvalue(0.95), " p(1.47) =", ad_uniformity_pvalue(1.47))

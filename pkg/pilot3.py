import time

import numpy as np

from wmixgof import FitConfig, benchmark_populations, fit_mle, run_study, sample_mixture

pops = benchmark_populations()

print("== pop 5 n=1000 recovery across seeds ==")
truth = pops[4].theta.as_array()
for s in range(10):
    sm = sample_mixture(pops[4].theta, 1000, rng_seed=1000 + s)
    fit = fit_mle(sm, FitConfig(seed=s))
    err = np.abs(fit.theta_hat.as_array() - truth)
    print(f"seed {1000+s}: max coord err {err.max():.4f}  {np.round(err,4)}")

print("== known-theta calibration (acceptance 7 style), pop 1, 500 reps ==")
t0 = time.time()
res = run_study(pops[0], 500, 100, seed=2024, estimate_parameters=False)
print(f"time {time.time()-t0:.1f}s  AD={res.ad_statistic:.4f} p={res.ad_p_value:.4f} failed={res.n_failed_fits}")
rej = float(np.mean(res.p_values < 0.05))
print(f"rejection rate at 5%: {rej:.4f}")

print("== estimated pipeline, pop 1, 100 reps pilot ==")
t0 = time.time()
res = run_study(pops[0], 100, 100, seed=11, grid_size=200)
dt = time.time() - t0
print(f"time {dt:.1f}s ({dt/100:.2f}s/rep) AD={res.ad_statistic:.4f} p={res.ad_p_value:.4f} failed={res.n_failed_fits}")
print(f"rejection rate at 5%: {float(np.mean(res.p_values < 0.05)):.4f}")
print("p quantiles:", np.round(np.quantile(res.p_values, [0.1,0.25,0.5,0.75,0.9]), 3))

print("== estimated pipeline, pop 5, 100 reps pilot ==")
t0 = time.time()
res = run_study(pops[4], 100, 100, seed=11, grid_size=200)
dt = time.time() - t0
print(f"time {dt:.1f}s ({dt/100:.2f}s/rep) AD={res.ad_statistic:.4f} p={res.ad_p_value:.4f} failed={res.n_failed_fits}")
print(f"rejection rate at 5%: {float(np.mean(res.p_values < 0.05)):.4f}")
print("p quantiles:", np.round(np.quantile(res.p_values, [0.1,0.25,0.5,0.75,0.9]), 3))

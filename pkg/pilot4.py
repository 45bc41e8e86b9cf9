import time

import numpy as np

from wmixgof import benchmark_populations, run_study, simple_hypothesis_lambdas

pops = benchmark_populations()

print("== pop 1, n=100, 500 reps (acceptance 6 config) ==")
t0 = time.time()
res = run_study(pops[0], 500, 100, seed=2024, grid_size=200)
print(f"time {time.time()-t0:.0f}s AD={res.ad_statistic:.4f} p={res.ad_p_value:.5f} "
      f"failed={res.n_failed_fits} rej={float(np.mean(res.p_values < 0.05)):.4f}")
print("p quantiles:", np.round(np.quantile(res.p_values, [0.05,0.1,0.25,0.5,0.75,0.9,0.95]), 3))
w2_mean_proxy = None

print("== pop 1, n=300, 150 reps (does calibration improve with n?) ==")
t0 = time.time()
res3 = run_study(pops[0], 150, 300, seed=77, grid_size=200)
print(f"time {time.time()-t0:.0f}s AD={res3.ad_statistic:.4f} p={res3.ad_p_value:.5f} "
      f"failed={res3.n_failed_fits} rej={float(np.mean(res3.p_values < 0.05)):.4f}")
print("p quantiles:", np.round(np.quantile(res3.p_values, [0.1,0.25,0.5,0.75,0.9]), 3))

print("== pop 2, n=100, 150 reps ==")
t0 = time.time()
res2 = run_study(pops[1], 150, 100, seed=55, grid_size=200)
print(f"time {time.time()-t0:.0f}s AD={res2.ad_statistic:.4f} p={res2.ad_p_value:.5f} "
      f"failed={res2.n_failed_fits} rej={float(np.mean(res2.p_values < 0.05)):.4f}")
print("p quantiles:", np.round(np.quantile(res2.p_values, [0.1,0.25,0.5,0.75,0.9]), 3))

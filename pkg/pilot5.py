import numpy as np

from wmixgof import FitConfig, benchmark_populations, fit_mle, sample_mixture
from wmixgof.simulation import _replication_seeds

pops = benchmark_populations()
th1 = pops[0].theta

print("== pop 1 n=100: fitted parameter extremes over 60 reps ==")
rows = []
for rep in range(60):
    s_sample, s_fit = _replication_seeds(2024, rep)
    sm = sample_mixture(th1, 100, s_sample)
    fit = fit_mle(sm, FitConfig(seed=s_fit))
    t = fit.theta_hat
    rows.append((max(t.alpha1, t.alpha2), min(t.beta1, t.beta2), t.p, fit.n_boundary_starts))
rows = np.array(rows)
amax, bmin, p, nb = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
print("alpha max: median", np.median(amax), "q90", np.quantile(amax, 0.9), "max", amax.max())
print("count alpha_max > 20:", int(np.sum(amax > 20)), " > 50:", int(np.sum(amax > 50)), " > 1000:", int(np.sum(amax > 1000)))
print("p_hat: min", p.min(), "q10", np.quantile(p, 0.1), "q90", np.quantile(p, 0.9), "max", p.max())
print("count p outside [0.05,0.95]:", int(np.sum((p < 0.05) | (p > 0.95))))
print("boundary starts per fit: mean", nb.mean(), "max", nb.max())

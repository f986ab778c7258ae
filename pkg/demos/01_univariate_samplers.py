"""Three ways to draw the same self-exciting process.

We simulate one parameter set with the generation-by-generation sampler,
Ogata thinning and the exact cluster construction, then check that the
counts agree with each other and with the closed-form mean.
"""

import numpy as np

from hawkesgraph import HawkesParams, SimConfig, derive_trial_seed, expected_count, ks_two_sample, summarize
from hawkesgraph.univariate import SAMPLERS, acceptance_ratio, simulate_generations

params = HawkesParams.from_values(1.0, 1.0, 2.0)
horizon, reps = 10.0, 2000

# A single generation trace shows how immigrants spawn offspring in waves.
trace = simulate_generations(SimConfig(params, horizon, seed=7))
print("generation sizes:", [g.size for g in trace.generations])
print(f"acceptance ratio of that run: {acceptance_ratio(trace):.3f}")

counts = {}
for name, sampler in sorted(SAMPLERS.items()):
    counts[name] = np.array([len(sampler(SimConfig(params, horizon, derive_trial_seed(1, i)))) for i in range(reps)])
    s = summarize(counts[name])
    print(f"{name:>12}: mean {s.mean:6.3f} ± {s.std_err:.3f}")
print(f"{'closed form':>12}: {expected_count(params, horizon):6.3f}")

print("KS p-value, thinning vs cluster:", round(ks_two_sample(counts["thinning"], counts["cluster"]).pvalue, 3))

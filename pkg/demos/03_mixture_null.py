# chi2_1 + w * chi2_1: deterministic tail probabilities against brute force.
import numpy as np
from scipy import stats

from xhwe import nulldist as nd

for w in (0.0, 0.2, 1 / 3, 0.6, 1.0):
    q = nd.mixture_quantile(0.05, w)
    print(f"w={w:.3f}  5% critical value {q:.4f}")
print("chi2_1 and chi2_2 critical values:", stats.chi2.isf(0.05, 1), stats.chi2.isf(0.05, 2))

# Monte Carlo check with a million draws
w = 0.3
draws = nd.mc_mixture_draws(w, 1_000_000, seed=1)
for x in (2.0, 4.2, 10.0):
    print(f"x={x:5.1f}  exact {nd.mixture_sf(x, w):.5f}  MC {np.mean(draws > x):.5f}")

# Far tails stay finite on the log scale
print("-log10 P(X > 800) =", nd.neglog10(nd.mixture_logsf(800.0, w)))

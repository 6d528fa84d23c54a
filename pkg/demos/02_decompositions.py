# The joint X-NPR test is exactly "HWD part + sdMAF part", and the
# Pearson test at the pooled frequency is "HWD part + w * sdMAF part".
import numpy as np

from xhwe import GenotypeCounts, decompose_joint, pearson_xnpr_pooled, ra_xnpr_joint_2df

rng = np.random.default_rng(0)

worst = 0.0
for _ in range(2000):
    f, m = rng.integers(50, 2000, size=2)
    fem = rng.multinomial(f, rng.dirichlet([1, 1, 1]))
    m2 = rng.binomial(m, rng.uniform(0.05, 0.95))
    snp = GenotypeCounts.npr(tuple(int(x) for x in fem), (int(m - m2), int(m2)))
    if not 0 < fem[1] + 2 * fem[2] < 2 * f:
        continue
    d = decompose_joint(snp)
    worst = max(worst, abs(d.identity_residual) / ra_xnpr_joint_2df(snp).statistic)
print("largest relative residual of the joint decomposition:", worst)

# One SNP, in detail
snp = GenotypeCounts.npr((86, 228, 22), (222, 94))
d = decompose_joint(snp)
pp = pearson_xnpr_pooled(snp)
w = snp.m / (2 * snp.f + snp.m)
print(f"joint {ra_xnpr_joint_2df(snp).statistic:.4f} = {d.hwd.statistic:.4f} + {d.sdmaf.statistic:.4f}")
print(f"pooled Pearson {pp.statistic:.4f} = {d.hwd.statistic:.4f} + {w:.4f} * {d.sdmaf.statistic:.4f}")
# so under female HWE with an sdMAF the pooled Pearson statistic picks up a
# w-weighted chi-square of the frequency difference: its null is chi2_1 + w chi2_1
print("null:", pp.null)

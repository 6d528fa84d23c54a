# Every test in the toolkit applied to one X-linked SNP.
# rs6655837, 336 females and 316 males.
from xhwe import GenotypeCounts, allele_stats, run_test, DEFAULT_PANELS, Region

snp = GenotypeCounts.npr((86, 228, 22), (222, 94), id="rs6655837")

st = allele_stats(snp)
print(f"p_f={st.p_f:.3f}  p_m={st.p_m:.3f}  pooled={st.p_pooled:.3f}  delta_f={st.delta_f:.3f}")

# Females carry two copies, males one, so a Pearson test on pooled genotypes
# is not defined here.  The default X-NPR panel instead:
for name in DEFAULT_PANELS[Region.X_NPR]:
    r = run_test(name, snp)
    print(f"{name:24s} stat={r.statistic:9.3f}  null={str(r.null):18s} p={r.p:.3g}")

# The female-only test does not care what the males look like
flipped_males = GenotypeCounts.npr((86, 228, 22), (94, 222))
print(run_test("ra_xnpr_female_1df", flipped_males).p == run_test("ra_xnpr_female_1df", snp).p)

# PAR: males are diploid.  Here only the males deviate (excess heterozygotes)
# and their allele frequency differs from the females'; pooling hides it.
par = GenotypeCounts.diploid((265, 66, 5), (64, 213, 39), region=Region.X_PAR)
for name in DEFAULT_PANELS[Region.X_PAR]:
    print(name, f"{run_test(name, par).p:.3g}")

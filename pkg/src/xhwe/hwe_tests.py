"""HWE and sdMAF test statistics for autosomal, X-NPR and X-PAR SNPs.

Each public test validates its input, evaluates a closed-form statistic and
attaches the matching null distribution.  Statistics are computed by small
array kernels (``_k_*``) that accept scalars or numpy arrays of counts, so the
simulation harness evaluates thousands of replicates in one call through the
very same arithmetic.  Pearson goodness-of-fit sums and their regression
(score-test) counterparts are deliberately separate kernels: the equalities
between them are checked, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .core import GenotypeCounts, Region, allele_stats
from .errors import (
    DegenerateLocus,
    EmptySex,
    ExternalFrequencyOutOfRange,
    VarianceNonpositive,
    WrongRegion,
)
from .nulldist import ChiSq, Mixture, NullSpec

__all__ = [
    "TestResult",
    "pearson_auto_1df",
    "pearson_auto_1df_moment",
    "pearson_auto_2df",
    "pearson_auto_2df_moment",
    "ra_auto_1df",
    "pearson_xnpr_fm",
    "ra_xnpr_joint_2df",
    "ra_xnpr_pooled_1df",
    "pearson_xnpr_pooled",
    "pearson_xnpr_female_1df",
    "ra_xnpr_female_1df",
    "sdmaf_component_hwe",
    "sdmaf_robust",
    "ra_xpar_2df",
    "ra_xpar_pooled_1df",
    "decompose_joint",
    "TESTS",
    "DEFAULT_PANELS",
    "applicable",
    "run_test",
]

LOW_COUNT = "low_count"


@dataclass(frozen=True)
class TestResult:
    """Statistic, its null, and p-value on linear and -log10 scales.

    ``p`` flushes to 0 below ~1e-308; ``neglog10_p`` is computed in log space
    and stays finite.  ``components`` is set for tests whose statistic is a
    sum of two separately interpretable parts.
    """

    __test__ = False  # keep pytest from collecting this class

    test: str
    statistic: float
    null: NullSpec
    p: float
    neglog10_p: float
    components: Optional[tuple[float, float]] = None
    warnings: tuple[str, ...] = field(default=())


def _result(test, statistic, null, components=None, low_count=False):
    statistic = float(statistic)
    if components is not None:
        components = (float(components[0]), float(components[1]))
    return TestResult(
        test=test,
        statistic=statistic,
        null=null,
        p=null.sf(statistic),
        neglog10_p=null.neglog10_sf(statistic),
        components=components,
        warnings=(LOW_COUNT,) if low_count else (),
    )


# -- kernels (scalars or arrays) ----------------------------------------------


def _k_gof3(c0, c1, c2, p):
    """Three-cell Pearson sum for diploid counts against HWE proportions at ``p``."""
    n = c0 + c1 + c2
    q = 1.0 - p
    e0 = n * q * q
    e1 = n * 2.0 * p * q
    e2 = n * p * p
    return (c0 - e0) ** 2 / e0 + (c1 - e1) ** 2 / e1 + (c2 - e2) ** 2 / e2


def _k_diploid_freq(c0, c1, c2):
    return (c1 + 2.0 * c2) / (2.0 * (c0 + c1 + c2))


def _k_moment_1df(c0, c1, c2):
    # (p2 - p^2)^2 / (p^2 (1-p)^2 / n)
    n = c0 + c1 + c2
    p = _k_diploid_freq(c0, c1, c2)
    p2 = c2 / n
    return (p2 - p * p) ** 2 / (p * p * (1.0 - p) ** 2 / n)


def _k_moment_2df(c0, c1, c2, p):
    n = c0 + c1 + c2
    ph = _k_diploid_freq(c0, c1, c2)
    p2 = c2 / n
    hwd = (p2 - ph * ph + (ph - p) ** 2) ** 2 / (p * p * (1.0 - p) ** 2 / n)
    freq = (ph - p) ** 2 / (p * (1.0 - p) / (2.0 * n))
    return hwd, freq


def _k_ra_1df(c0, c1, c2):
    # n * rho^2 with rho = delta / (p (1 - p))
    n = c0 + c1 + c2
    p = _k_diploid_freq(c0, c1, c2)
    delta = c2 / n - p * p
    rho = delta / (p * (1.0 - p))
    return n * rho * rho


def _k_npr_freqs(f0, f1, f2, m0, m2):
    f = f0 + f1 + f2
    m = m0 + m2
    p_f = (f1 + 2.0 * f2) / (2.0 * f)
    p_pool = (f1 + 2.0 * f2 + m2) / (2.0 * f + m)
    return f, m, p_f, p_pool


def _k_pearson_xnpr_fm(f0, f1, f2, m0, m2):
    f, m, _, p = _k_npr_freqs(f0, f1, f2, m0, m2)
    q = 1.0 - p
    male = (m0 - m * q) ** 2 / (m * q) + (m2 - m * p) ** 2 / (m * p)
    return _k_gof3(f0, f1, f2, p) + male


def _k_ra_xnpr_parts(f0, f1, f2, m0, m2):
    """HWD part (no-sdMAF score test) and sdMAF-under-HWE part of the joint test."""
    f0, f1, f2, m0, m2 = (np.asarray(c, dtype=float) for c in (f0, f1, f2, m0, m2))
    f, m, p_f, p = _k_npr_freqs(f0, f1, f2, m0, m2)
    delta_f = f2 / f - p_f * p_f
    v = p * (1.0 - p)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_m = np.where(m > 0, m2 / np.where(m > 0, m, 1.0), 0.0)
    d = p_f - p_m
    w = m / (2.0 * f + m)
    hwd = (delta_f + w * w * d * d) ** 2 / (v * v / f)
    with np.errstate(invalid="ignore", divide="ignore"):
        sdmaf = d * d / ((1.0 / (2.0 * f) + 1.0 / m) * v)
    if np.ndim(hwd) == 0:
        return float(hwd), float(sdmaf)
    return hwd, sdmaf


def _k_pearson_xnpr_pooled(f0, f1, f2, m0, m2):
    _, _, _, p = _k_npr_freqs(f0, f1, f2, m0, m2)
    return _k_gof3(f0, f1, f2, p)


def _k_ra_female(f0, f1, f2):
    f = f0 + f1 + f2
    p_f = _k_diploid_freq(f0, f1, f2)
    delta = f2 / f - p_f * p_f
    return delta * delta / (p_f * p_f * (1.0 - p_f) ** 2 / f)


def _k_pearson_female(f0, f1, f2):
    return _k_gof3(f0, f1, f2, _k_diploid_freq(f0, f1, f2))


def _k_ra_xpar_2df(f0, f1, f2, m0, m1, m2):
    return _k_ra_1df(f0, f1, f2), _k_ra_1df(m0, m1, m2)


def _k_ra_xpar_pooled(f0, f1, f2, m0, m1, m2):
    return _k_gof3(f0 + m0, f1 + m1, f2 + m2, _k_diploid_freq(f0 + m0, f1 + m1, f2 + m2))


def _k_sdmaf_robust_var(f0, f1, f2, m0, m1, m2, hemizygous):
    f = f0 + f1 + f2
    m = m0 + m1 + m2
    p_f = _k_diploid_freq(f0, f1, f2)
    # p(1-p)(1+rho) = p(1-p) + delta
    var_f = (p_f * (1.0 - p_f) + (f2 / f - p_f * p_f)) / (2.0 * f)
    if hemizygous:
        p_m = m2 / m
        var_m = p_m * (1.0 - p_m) / m
    else:
        p_m = _k_diploid_freq(m0, m1, m2)
        var_m = (p_m * (1.0 - p_m) + (m2 / m - p_m * p_m)) / (2.0 * m)
    return p_f - p_m, var_f + var_m


def _k_sdmaf_robust(f0, f1, f2, m0, m1, m2, hemizygous):
    d, var = _k_sdmaf_robust_var(f0, f1, f2, m0, m1, m2, hemizygous)
    return d * d / var


# -- guards -------------------------------------------------------------------


def _require_region(counts, allowed, test):
    if counts.region not in allowed:
        names = ", ".join(r.name for r in allowed)
        raise WrongRegion(f"{test} needs a {names} SNP, got {counts.region.name}")


def _require_sexes(counts, test, female=True, male=False):
    if female and counts.f == 0:
        raise EmptySex(f"{test} needs female genotypes (f = 0)")
    if male and counts.m == 0:
        raise EmptySex(f"{test} needs male genotypes (m = 0)")


def _require_polymorphic(p, what, test):
    if p is None or not 0.0 < p < 1.0:
        raise DegenerateLocus(f"{test}: {what} = {p} is monomorphic")


def _low_count(individuals, p):
    return individuals < 30 or 2.0 * individuals * p * (1.0 - p) < 5.0


_DIPLOID = (Region.AUTOSOME, Region.X_PAR)
_ANY = (Region.AUTOSOME, Region.X_NPR, Region.X_PAR)


# -- autosomal / pooled diploid -----------------------------------------------


def _pooled_nonempty(counts, test):
    if counts.n == 0:
        raise EmptySex(f"{test} needs at least one genotype")
    n0, n1, n2 = counts.pooled
    p = _k_diploid_freq(n0, n1, n2)
    _require_polymorphic(p, "pooled frequency", test)
    return n0, n1, n2, p


def pearson_auto_1df(counts: GenotypeCounts) -> TestResult:
    """Classical 1 df Pearson HWE test on sex-pooled diploid counts."""
    test = "pearson_auto_1df"
    _require_region(counts, _DIPLOID, test)
    n0, n1, n2, p = _pooled_nonempty(counts, test)
    stat = _k_gof3(n0, n1, n2, p)
    return _result(test, stat, ChiSq(1), low_count=_low_count(counts.n, p))


def pearson_auto_1df_moment(counts: GenotypeCounts) -> float:
    """The 1 df statistic written as squared HWD over its variance."""
    _require_region(counts, _DIPLOID, "pearson_auto_1df")
    n0, n1, n2, _ = _pooled_nonempty(counts, "pearson_auto_1df")
    return float(_k_moment_1df(n0, n1, n2))


def pearson_auto_2df(counts: GenotypeCounts, p: float) -> TestResult:
    """2 df Pearson test against an externally specified frequency ``p``.

    ``components`` holds the moment-form split into an HWD term and a
    frequency-consistency term (see :func:`pearson_auto_2df_moment`).
    """
    test = "pearson_auto_2df"
    _require_region(counts, _DIPLOID, test)
    if not 0.0 < p < 1.0:
        raise ExternalFrequencyOutOfRange(f"external frequency must lie in (0, 1), got {p}")
    if counts.n == 0:
        raise EmptySex(f"{test} needs at least one genotype")
    n0, n1, n2 = counts.pooled
    stat = _k_gof3(n0, n1, n2, p)
    parts = _k_moment_2df(n0, n1, n2, p)
    return _result(test, stat, ChiSq(2), components=parts, low_count=_low_count(counts.n, p))


def pearson_auto_2df_moment(counts: GenotypeCounts, p: float) -> tuple[float, float]:
    if not 0.0 < p < 1.0:
        raise ExternalFrequencyOutOfRange(f"external frequency must lie in (0, 1), got {p}")
    hwd, freq = _k_moment_2df(*counts.pooled, p)
    return float(hwd), float(freq)


def ra_auto_1df(counts: GenotypeCounts) -> TestResult:
    """Score test of zero within-individual allele correlation, n * rho_hat**2."""
    test = "ra_auto_1df"
    _require_region(counts, _DIPLOID, test)
    n0, n1, n2, p = _pooled_nonempty(counts, test)
    return _result(test, _k_ra_1df(n0, n1, n2), ChiSq(1), low_count=_low_count(counts.n, p))


# -- X-NPR --------------------------------------------------------------------


def _npr_setup(counts, test, male=True):
    _require_region(counts, (Region.X_NPR,), test)
    _require_sexes(counts, test, female=True, male=male)
    st = allele_stats(counts)
    _require_polymorphic(st.p_pooled, "pooled frequency", test)
    return st


def _npr_args(counts):
    return counts.f0, counts.f1, counts.f2, counts.m0, counts.m2


def pearson_xnpr_fm(counts: GenotypeCounts) -> TestResult:
    """Five-cell Pearson test on female genotypes and male alleles at the pooled frequency."""
    test = "pearson_xnpr_fm"
    st = _npr_setup(counts, test)
    stat = _k_pearson_xnpr_fm(*_npr_args(counts))
    return _result(test, stat, ChiSq(2), low_count=_low_count(counts.f, st.p_pooled))


def ra_xnpr_joint_2df(counts: GenotypeCounts) -> TestResult:
    """Joint 2 df score test of female HWE and no sdMAF.

    ``components`` = (HWD part, sdMAF part); they are the statistics of
    :func:`ra_xnpr_pooled_1df` and :func:`sdmaf_component_hwe`.
    """
    test = "ra_xnpr_joint_2df"
    st = _npr_setup(counts, test)
    hwd, sdmaf = _k_ra_xnpr_parts(*_npr_args(counts))
    return _result(
        test, hwd + sdmaf, ChiSq(2), components=(hwd, sdmaf),
        low_count=_low_count(counts.f, st.p_pooled),
    )


def ra_xnpr_pooled_1df(counts: GenotypeCounts) -> TestResult:
    """1 df HWE score test assuming equal allele frequencies in both sexes.

    With no males the sdMAF correction vanishes and the statistic equals the
    female-only test.
    """
    test = "ra_xnpr_pooled_1df"
    st = _npr_setup(counts, test, male=False)
    hwd, _ = _k_ra_xnpr_parts(*_npr_args(counts))
    return _result(test, hwd, ChiSq(1), low_count=_low_count(counts.f, st.p_pooled))


def pearson_xnpr_pooled(counts: GenotypeCounts) -> TestResult:
    """Female three-cell Pearson sum evaluated at the pooled frequency.

    Its null is chi2_1 + w * chi2_1 with w = m / (2f + m); ``components`` =
    (no-sdMAF HWD statistic, w * sdMAF-under-HWE statistic).
    """
    test = "pearson_xnpr_pooled"
    st = _npr_setup(counts, test, male=False)
    f, m = counts.f, counts.m
    w = m / (2.0 * f + m)
    stat = _k_pearson_xnpr_pooled(*_npr_args(counts))
    hwd, sdmaf = _k_ra_xnpr_parts(*_npr_args(counts))
    weighted = w * sdmaf if m > 0 else 0.0
    return _result(
        test, stat, Mixture(w), components=(hwd, weighted),
        low_count=_low_count(f, st.p_pooled),
    )


def _female_setup(counts, test, regions):
    _require_region(counts, regions, test)
    _require_sexes(counts, test, female=True)
    p_f = _k_diploid_freq(*counts.female)
    _require_polymorphic(p_f, "female frequency", test)
    return p_f


def pearson_xnpr_female_1df(counts: GenotypeCounts) -> TestResult:
    """Female-only three-cell Pearson test at the female frequency; males ignored."""
    test = "pearson_xnpr_female_1df"
    p_f = _female_setup(counts, test, (Region.X_NPR, Region.X_PAR))
    stat = _k_pearson_female(*counts.female)
    return _result(test, stat, ChiSq(1), low_count=_low_count(counts.f, p_f))


def ra_xnpr_female_1df(counts: GenotypeCounts) -> TestResult:
    """Female-only HWE score test f * rho_f**2, valid whatever the sdMAF."""
    test = "ra_xnpr_female_1df"
    p_f = _female_setup(counts, test, (Region.X_NPR, Region.X_PAR))
    stat = _k_ra_female(*counts.female)
    return _result(test, stat, ChiSq(1), low_count=_low_count(counts.f, p_f))


def sdmaf_component_hwe(counts: GenotypeCounts) -> TestResult:
    """sdMAF test assuming female HWE, with the pooled-frequency variance."""
    test = "sdmaf_component_hwe"
    st = _npr_setup(counts, test)
    _, sdmaf = _k_ra_xnpr_parts(*_npr_args(counts))
    return _result(test, sdmaf, ChiSq(1), low_count=_low_count(counts.f, st.p_pooled))


def sdmaf_robust(counts: GenotypeCounts) -> TestResult:
    """sdMAF test whose female variance is inflated by (1 + rho_f).

    Males are hemizygous on X-NPR (binomial variance) and diploid elsewhere
    (variance inflated by (1 + rho_m)).
    """
    test = "sdmaf_robust"
    _require_sexes(counts, test, female=True, male=True)
    st = allele_stats(counts)
    _require_polymorphic(st.p_f, "female frequency", test)
    _require_polymorphic(st.p_m, "male frequency", test)
    hemi = counts.region is Region.X_NPR
    d, var = _k_sdmaf_robust_var(*counts.female, *counts.male, hemi)
    if not var > 0.0:
        raise VarianceNonpositive(f"{test}: variance estimate {var} is not positive")
    return _result(test, d * d / var, ChiSq(1), low_count=_low_count(counts.f, st.p_f))


# -- X-PAR --------------------------------------------------------------------


def ra_xpar_2df(counts: GenotypeCounts) -> TestResult:
    """Sum of sex-specific 1 df HWE statistics, f * rho_f**2 + m * rho_m**2."""
    test = "ra_xpar_2df"
    _require_region(counts, _DIPLOID, test)
    _require_sexes(counts, test, female=True, male=True)
    st = allele_stats(counts)
    _require_polymorphic(st.p_f, "female frequency", test)
    _require_polymorphic(st.p_m, "male frequency", test)
    fem, mal = _k_ra_xpar_2df(*counts.female, *counts.male)
    low = _low_count(counts.f, st.p_f) or _low_count(counts.m, st.p_m)
    return _result(test, fem + mal, ChiSq(2), components=(fem, mal), low_count=low)


def ra_xpar_pooled_1df(counts: GenotypeCounts) -> TestResult:
    """PAR HWE test assuming no sdMAF: the 1 df Pearson test on pooled counts."""
    test = "ra_xpar_pooled_1df"
    _require_region(counts, (Region.X_PAR,), test)
    _, _, _, p = _pooled_nonempty(counts, test)
    stat = _k_ra_xpar_pooled(*counts.female, *counts.male)
    return _result(test, stat, ChiSq(1), low_count=_low_count(counts.n, p))


# -- decomposition ------------------------------------------------------------


class JointDecomposition(NamedTuple):
    hwd: TestResult
    sdmaf: TestResult
    identity_residual: float


def decompose_joint(counts: GenotypeCounts) -> JointDecomposition:
    """Split the joint X-NPR test into its HWD and sdMAF tests.

    ``identity_residual`` is joint minus (HWD + sdMAF), computed with the
    five-cell Pearson form of the joint statistic so that it is a genuine
    check rather than zero by construction.
    """
    joint = pearson_xnpr_fm(counts)
    hwd = ra_xnpr_pooled_1df(counts)
    sdmaf = sdmaf_component_hwe(counts)
    return JointDecomposition(hwd, sdmaf, joint.statistic - (hwd.statistic + sdmaf.statistic))


# -- registry -----------------------------------------------------------------

TESTS: dict[str, Callable[[GenotypeCounts], TestResult]] = {
    "pearson_auto_1df": pearson_auto_1df,
    "ra_auto_1df": ra_auto_1df,
    "pearson_xnpr_fm": pearson_xnpr_fm,
    "ra_xnpr_joint_2df": ra_xnpr_joint_2df,
    "ra_xnpr_pooled_1df": ra_xnpr_pooled_1df,
    "pearson_xnpr_pooled": pearson_xnpr_pooled,
    "pearson_xnpr_female_1df": pearson_xnpr_female_1df,
    "ra_xnpr_female_1df": ra_xnpr_female_1df,
    "sdmaf_component_hwe": sdmaf_component_hwe,
    "sdmaf_robust": sdmaf_robust,
    "ra_xpar_2df": ra_xpar_2df,
    "ra_xpar_pooled_1df": ra_xpar_pooled_1df,
}

REGIONS: dict[str, tuple[Region, ...]] = {
    "pearson_auto_1df": _DIPLOID,
    "ra_auto_1df": _DIPLOID,
    "pearson_xnpr_fm": (Region.X_NPR,),
    "ra_xnpr_joint_2df": (Region.X_NPR,),
    "ra_xnpr_pooled_1df": (Region.X_NPR,),
    "pearson_xnpr_pooled": (Region.X_NPR,),
    "pearson_xnpr_female_1df": (Region.X_NPR, Region.X_PAR),
    "ra_xnpr_female_1df": (Region.X_NPR, Region.X_PAR),
    "sdmaf_component_hwe": (Region.X_NPR,),
    "sdmaf_robust": _ANY,
    "ra_xpar_2df": _DIPLOID,
    "ra_xpar_pooled_1df": (Region.X_PAR,),
}

DEFAULT_PANELS: dict[Region, tuple[str, ...]] = {
    Region.AUTOSOME: ("pearson_auto_1df",),
    Region.X_NPR: (
        "ra_xnpr_joint_2df",
        "ra_xnpr_pooled_1df",
        "pearson_xnpr_pooled",
        "ra_xnpr_female_1df",
        "sdmaf_component_hwe",
        "sdmaf_robust",
    ),
    Region.X_PAR: ("ra_xpar_2df", "ra_xpar_pooled_1df", "sdmaf_robust"),
}


def applicable(test: str, region: Region) -> bool:
    return region in REGIONS[test]


def run_test(test: str, counts: GenotypeCounts) -> TestResult:
    try:
        fn = TESTS[test]
    except KeyError:
        raise ValueError(f"unknown test {test!r}; choose from {sorted(TESTS)}") from None
    return fn(counts)

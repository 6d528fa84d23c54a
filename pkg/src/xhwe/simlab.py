"""Monte Carlo harness for type-I-error and power studies.

Every replicate draws from its own counter-based sub-stream keyed by
``(seed, scenario id, replicate index)``, so a replicate can be regenerated in
isolation and results never depend on how work is split across processes.
Test statistics are evaluated in bulk with the same kernels the per-SNP tests
use.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import stats

from . import hwe_tests as ht
from . import rng
from .core import GenotypeCounts, Region
from .errors import EmptyRun, InfeasibleDisequilibrium
from .nulldist import ChiSq, Mixture, NullSpec

__all__ = [
    "SimScenario",
    "TestRate",
    "RejectionReport",
    "genotype_probs",
    "simulate_counts",
    "simulate_batch",
    "run_rejection",
    "run_t1e",
    "run_power",
    "NPR_TESTS",
    "PAR_TESTS",
]

NPR_TESTS = ("ra_xnpr_joint_2df", "ra_xnpr_pooled_1df", "pearson_xnpr_pooled", "ra_xnpr_female_1df")
PAR_TESTS = ("ra_xpar_2df", "ra_xpar_pooled_1df")

_EPS = 1e-12


def genotype_probs(p: float, delta: float) -> tuple[float, float, float]:
    """Genotype probabilities ``(p_AA, p_Aa, p_aa)`` for allele frequency ``p`` and HWD ``delta``."""
    p_AA = p * p + delta
    p_Aa = 2.0 * p * (1.0 - p) - 2.0 * delta
    p_aa = (1.0 - p) ** 2 + delta
    if min(p_AA, p_Aa, p_aa) < -_EPS or max(p_AA, p_Aa, p_aa) > 1.0 + _EPS:
        raise InfeasibleDisequilibrium(
            f"p = {p}, delta = {delta} gives genotype probabilities "
            f"({p_AA:.4g}, {p_Aa:.4g}, {p_aa:.4g}) outside [0, 1]"
        )
    p_AA = min(max(p_AA, 0.0), 1.0)
    p_Aa = min(max(p_Aa, 0.0), 1.0 - p_AA)
    return p_AA, p_Aa, 1.0 - p_AA - p_Aa


@dataclass(frozen=True)
class SimScenario:
    """One simulation cell; ``sdmaf = p_f - p_m``."""

    f: int
    m: int
    p_f: float
    sdmaf: float = 0.0
    delta_f: float = 0.0
    delta_m: float = 0.0
    region: Region = Region.X_NPR
    replicates: int = 10_000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.f < 0 or self.m < 0:
            raise ValueError("sample sizes must be non-negative")
        if self.region is Region.AUTOSOME:
            raise ValueError("simulation supports X_NPR and X_PAR scenarios")
        if not 0.0 < self.p_m < 1.0 or not 0.0 < self.p_f < 1.0:
            raise InfeasibleDisequilibrium(
                f"allele frequencies p_f = {self.p_f}, p_m = {self.p_m} must lie in (0, 1)"
            )
        if self.region is Region.X_NPR and self.delta_m != 0.0:
            raise ValueError("delta_m is undefined for hemizygous X-NPR males")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        genotype_probs(self.p_f, self.delta_f)
        if self.region is Region.X_PAR:
            genotype_probs(self.p_m, self.delta_m)

    @property
    def p_m(self) -> float:
        return self.p_f - self.sdmaf

    @property
    def stream(self) -> int:
        # replicates and alpha are excluded: more replicates extend a run, and
        # every alpha sees the same data
        return rng.stream_id(
            "scenario", self.region.value, self.f, self.m,
            float(self.p_f), float(self.sdmaf), float(self.delta_f), float(self.delta_m),
        )

    @property
    def label(self) -> str:
        return (
            f"{self.region.value}:f={self.f},m={self.m},p_f={self.p_f:g},"
            f"sdmaf={self.sdmaf:g},delta_f={self.delta_f:g},delta_m={self.delta_m:g}"
        )


def _draw(scenario: SimScenario, index: int) -> tuple[int, int, int, int, int, int]:
    gen = rng.generator(scenario.seed, scenario.stream, index)
    p_AA, p_Aa, p_aa = genotype_probs(scenario.p_f, scenario.delta_f)
    f0, f1, f2 = gen.multinomial(scenario.f, [p_aa, p_Aa, p_AA])
    if scenario.region is Region.X_NPR:
        m2 = int(gen.binomial(scenario.m, scenario.p_m))
        return int(f0), int(f1), int(f2), scenario.m - m2, 0, m2
    q_AA, q_Aa, q_aa = genotype_probs(scenario.p_m, scenario.delta_m)
    m0, m1, m2 = gen.multinomial(scenario.m, [q_aa, q_Aa, q_AA])
    return int(f0), int(f1), int(f2), int(m0), int(m1), int(m2)


def simulate_counts(scenario: SimScenario, replicate_index: int) -> GenotypeCounts:
    """Replicate ``replicate_index`` of ``scenario``; deterministic in (seed, index)."""
    return GenotypeCounts(scenario.region, *_draw(scenario, replicate_index))


def simulate_batch(scenario: SimScenario, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Counts for replicates ``start..stop-1`` as an ``(R, 6)`` array (f0 f1 f2 m0 m1 m2)."""
    stop = scenario.replicates if stop is None else stop
    out = np.empty((max(stop - start, 0), 6), dtype=np.int64)
    for row, index in enumerate(range(start, stop)):
        out[row] = _draw(scenario, index)
    return out


# -- bulk statistics ----------------------------------------------------------


def _polymorphic(p):
    return (p > 0.0) & (p < 1.0)


def _bulk(test: str, c: np.ndarray, scenario: SimScenario):
    """Statistic array, validity mask and null for ``test`` over count rows ``c``."""
    f0, f1, f2, m0, m1, m2 = (c[:, j].astype(float) for j in range(6))
    f = f0 + f1 + f2
    m = m0 + m1 + m2
    p_f = (f1 + 2 * f2) / (2 * f) if scenario.f else np.full(len(c), np.nan)
    npr = scenario.region is Region.X_NPR
    if npr:
        p_pool = (f1 + 2 * f2 + m2) / (2 * f + m)
        p_m = m2 / m if scenario.m else np.full(len(c), np.nan)
    else:
        p_pool = (f1 + m1 + 2 * (f2 + m2)) / (2 * (f + m))
        p_m = (m1 + 2 * m2) / (2 * m) if scenario.m else np.full(len(c), np.nan)

    with np.errstate(divide="ignore", invalid="ignore"):
        if test == "ra_xnpr_joint_2df":
            hwd, sd = ht._k_ra_xnpr_parts(f0, f1, f2, m0, m2)
            return hwd + sd, _polymorphic(p_pool), ChiSq(2)
        if test == "pearson_xnpr_fm":
            return ht._k_pearson_xnpr_fm(f0, f1, f2, m0, m2), _polymorphic(p_pool), ChiSq(2)
        if test == "ra_xnpr_pooled_1df":
            hwd, _ = ht._k_ra_xnpr_parts(f0, f1, f2, m0, m2)
            return hwd, _polymorphic(p_pool), ChiSq(1)
        if test == "sdmaf_component_hwe":
            _, sd = ht._k_ra_xnpr_parts(f0, f1, f2, m0, m2)
            return sd, _polymorphic(p_pool), ChiSq(1)
        if test == "pearson_xnpr_pooled":
            w = scenario.m / (2.0 * scenario.f + scenario.m)
            return ht._k_pearson_xnpr_pooled(f0, f1, f2, m0, m2), _polymorphic(p_pool), Mixture(w)
        if test == "ra_xnpr_female_1df":
            return ht._k_ra_female(f0, f1, f2), _polymorphic(p_f), ChiSq(1)
        if test == "pearson_xnpr_female_1df":
            return ht._k_pearson_female(f0, f1, f2), _polymorphic(p_f), ChiSq(1)
        if test == "sdmaf_robust":
            stat = ht._k_sdmaf_robust(f0, f1, f2, m0, m1, m2, npr)
            return stat, _polymorphic(p_f) & _polymorphic(p_m) & np.isfinite(stat), ChiSq(1)
        if test == "ra_xpar_2df" and not npr:
            fem, mal = ht._k_ra_xpar_2df(f0, f1, f2, m0, m1, m2)
            return fem + mal, _polymorphic(p_f) & _polymorphic(p_m), ChiSq(2)
        if test == "ra_xpar_pooled_1df" and not npr:
            return ht._k_ra_xpar_pooled(f0, f1, f2, m0, m1, m2), _polymorphic(p_pool), ChiSq(1)
    raise ValueError(f"test {test!r} is not simulated for region {scenario.region.name}")


# -- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class TestRate:
    """Rejection rate of one test with its Monte Carlo uncertainty.

    Degenerate replicates (monomorphic in the sample a test needs) are left out
    of ``valid`` and counted in ``degenerate``.
    """

    __test__ = False

    test: str
    rejections: int
    valid: int
    degenerate: int
    critical_value: float

    @property
    def rate(self) -> float:
        return self.rejections / self.valid if self.valid else math.nan

    @property
    def se(self) -> float:
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.valid) if self.valid else math.nan

    @property
    def ci99(self) -> tuple[float, float]:
        """Clopper-Pearson 99% interval for the rejection probability."""
        if not self.valid:
            return (math.nan, math.nan)
        ci = stats.binomtest(self.rejections, self.valid).proportion_ci(0.99, method="exact")
        return (float(ci.low), float(ci.high))


@dataclass(frozen=True)
class RejectionReport:
    scenario: SimScenario
    rates: dict[str, TestRate] = field(default_factory=dict)

    def __getitem__(self, test: str) -> TestRate:
        return self.rates[test]


def _default_tests(scenario):
    return NPR_TESTS if scenario.region is Region.X_NPR else PAR_TESTS


def run_rejection(scenario: SimScenario, tests: Optional[Sequence[str]] = None,
                  chunk: int = 50_000) -> RejectionReport:
    """Empirical rejection rates of ``tests`` at ``scenario.alpha``."""
    if scenario.replicates < 1:
        raise EmptyRun("scenario has no replicates")
    tests = tuple(tests or _default_tests(scenario))
    rejections = dict.fromkeys(tests, 0)
    valid = dict.fromkeys(tests, 0)
    crit = {}
    for start in range(0, scenario.replicates, chunk):
        counts = simulate_batch(scenario, start, min(start + chunk, scenario.replicates))
        for test in tests:
            stat, ok, null = _bulk(test, counts, scenario)
            if test not in crit:
                crit[test] = null.isf(scenario.alpha)
            rejections[test] += int(np.count_nonzero(ok & (stat >= crit[test])))
            valid[test] += int(np.count_nonzero(ok))
    rates = {
        t: TestRate(t, rejections[t], valid[t], scenario.replicates - valid[t], crit[t])
        for t in tests
    }
    return RejectionReport(scenario, rates)


def run_t1e(scenario: SimScenario, tests: Optional[Sequence[str]] = None) -> RejectionReport:
    """Rejection rates under female (and male, for PAR) HWE."""
    if scenario.delta_f != 0.0 or scenario.delta_m != 0.0:
        raise ValueError("type-I-error runs require delta_f = delta_m = 0")
    return run_rejection(scenario, tests)


def _run_one(args):
    scenario, tests = args
    return run_rejection(scenario, tests)


def run_power(scenarios: Iterable[SimScenario], tests: Optional[Sequence[str]] = None,
              workers: int = 1) -> list[RejectionReport]:
    """Rejection curves over a scenario grid, in grid order.

    With ``workers > 1`` scenarios run in separate processes; output is
    identical to the sequential run.
    """
    jobs = [(s, tests) for s in scenarios]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def delta_grid(lo: float = -0.04, hi: float = 0.04, step: float = 0.005) -> list[float]:
    """Evenly spaced HWD values, rounded to kill float drift."""
    k = int(round((hi - lo) / step))
    return [round(lo + i * step, 10) for i in range(k + 1)]

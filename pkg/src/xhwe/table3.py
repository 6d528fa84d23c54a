"""Published AFR (1000 Genomes, high coverage) hits and their count reconstruction.

Only estimates are published, so genotype counts are rebuilt from them with
336 females and 316 males:

    c2 = round(n * (delta + p**2)),  c1 = round(2 n p) - 2 c2,  c0 = n - c1 - c2

(hemizygous NPR males: m2 = round(m p_m)).  Statistics recomputed from these
counts are compared with the published p-values on the -log10 scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from . import hwe_tests as ht
from ._format import format_p
from .core import GenotypeCounts, Region

N_FEMALES = 336
N_MALES = 316
TOLERANCE = 0.5


class PublishedRow(NamedTuple):
    section: str  # "a" NPR, "b" PAR1, "c" PAR2
    id: str
    pos: int
    ref: str
    alt: str
    delta_f: float
    delta_m: Optional[float]
    p_f: float
    p_m: float
    p_pooled: float
    pvalues: tuple[float, ...]

    @property
    def region(self) -> Region:
        return Region.X_NPR if self.section == "a" else Region.X_PAR


NPR_COLUMNS = ("sdmaf_robust", "ra_xnpr_joint_2df", "ra_xnpr_pooled_1df", "ra_xnpr_female_1df")
PAR_COLUMNS = ("sdmaf_robust", "ra_xpar_pooled_1df", "ra_xpar_2df")

# fmt: off
ROWS = (
    PublishedRow("a", "rs6655837", 3448664, "A", "G", -0.098, None, 0.405, 0.297, 0.370, (2.83e-04, 1.07e-15, 2.21e-14, 7.26e-14)),
    PublishedRow("a", "rs1278131", 3455479, "A", "C", -0.067, None, 0.296, 0.266, 0.286, (0.292, 1.01e-08, 2.13e-09, 4.11e-09)),
    PublishedRow("a", "rs6612851", 57025923, "C", "T", -0.065, None, 0.272, 0.329, 0.290, (0.058, 1.08e-08, 7.83e-09, 1.60e-09)),
    PublishedRow("a", "rs7879488", 64320997, "A", "G", 0.024, None, 0.074, 0.070, 0.073, (0.796, 4.00e-10, 4.92e-11, 1.13e-10)),
    PublishedRow("a", "N/A", 105854847, "T", "C", 0.087, None, 0.132, 0.085, 0.117, (0.045, 5.63e-53, 2.88e-53, 1.94e-43)),
    PublishedRow("a", "rs28788859", 110914049, "G", "A", -0.078, None, 0.467, 0.513, 0.482, (0.160, 2.81e-08, 9.22e-09, 7.60e-09)),
    PublishedRow("a", "rs859902", 142631953, "T", "C", 0.027, None, 0.092, 0.066, 0.084, (0.175, 2.71e-10, 8.25e-11, 2.62e-09)),
    PublishedRow("a", "rs5936969", 69163175, "C", "T", -0.059, None, 0.293, 0.177, 0.256, (8.98e-06, 9.88e-11, 2.70e-08, 1.67e-07)),
    PublishedRow("a", "rs764585100", 107457632, "A", "T", 0.023, None, 0.062, 0.142, 0.088, (3.91e-04, 1.06e-10, 7.80e-08, 8.21e-13)),
    PublishedRow("a", "rs5968817", 84588702, "A", "C", 0.017, None, 0.061, 0.085, 0.069, (0.197, 2.12e-06, 9.04e-07, 4.38e-08)),
    PublishedRow("a", "rs73550265", 96543648, "T", "C", 0.015, None, 0.051, 0.066, 0.056, (0.352, 3.78e-07, 9.14e-08, 5.30e-09)),
    PublishedRow("a", "rs150556780", 145219770, "G", "A", 0.021, None, 0.076, 0.130, 0.093, (0.015, 5.56e-07, 3.69e-06, 3.90e-08)),
    PublishedRow("b", "rs867436760", 11391, "A", "G", -0.119, -0.108, 0.382, 0.386, 0.384, (0.852, 1.03e-34, 1.27e-33)),
    PublishedRow("b", "rs73178918", 1184574, "C", "G", -0.097, -0.103, 0.360, 0.354, 0.357, (0.775, 8.99e-29, 1.13e-27)),
    PublishedRow("b", "rs184807393", 249017, "A", "G", 0.049, 0.035, 0.247, 0.282, 0.264, (0.198, 2.54e-08, 8.12e-08)),
    PublishedRow("b", "rs2259750", 2387607, "G", "A", 0.002, -0.089, 0.113, 0.460, 0.281, (1.05e-66, 1.39e-01, 1.75e-09)),
    PublishedRow("b", "rs2857317", 2393813, "A", "G", 0.001, -0.179, 0.119, 0.547, 0.327, (1.47e-152, 2.21e-06, 9.74e-37)),
    PublishedRow("c", "rs306932", 153946131, "C", "T", 0.004, -0.151, 0.177, 0.576, 0.370, (1.97e-95, 5.94e-04, 3.87e-27)),
    PublishedRow("c", "rs306921", 153949768, "A", "T", 0.012, -0.131, 0.268, 0.601, 0.429, (4.27e-52, 2.10e-03, 2.58e-21)),
    PublishedRow("c", "rs306903", 153964583, "C", "T", -0.007, -0.133, 0.240, 0.598, 0.413, (7.52e-67, 1.58e-04, 7.55e-22)),
    PublishedRow("c", "rs306898", 153972806, "C", "T", -0.001, -0.100, 0.333, 0.650, 0.487, (4.37e-43, 1.44e-02, 4.96e-14)),
)
# fmt: on


def reconstruct_diploid(n: int, delta: float, p: float) -> tuple[int, int, int]:
    c2 = round(n * (delta + p * p))
    c1 = round(2 * n * p) - 2 * c2
    return (n - c1 - c2, c1, c2)


def reconstruct_counts(row: PublishedRow, f: int = N_FEMALES, m: int = N_MALES) -> GenotypeCounts:
    female = reconstruct_diploid(f, row.delta_f, row.p_f)
    if row.region is Region.X_NPR:
        m2 = round(m * row.p_m)
        male = (m - m2, 0, m2)
    else:
        male = reconstruct_diploid(m, row.delta_m, row.p_m)
    chrom = "X"
    return GenotypeCounts(
        row.region, *female, *male, chrom=chrom, pos=row.pos, id=row.id, ref=row.ref, alt=row.alt
    )


def columns_for(row: PublishedRow) -> tuple[str, ...]:
    return NPR_COLUMNS if row.region is Region.X_NPR else PAR_COLUMNS


def published_rows(sections: str = "abc") -> list[PublishedRow]:
    return [r for r in ROWS if r.section in sections]


@dataclass(frozen=True)
class Comparison:
    id: str
    section: str
    test: str
    published_p: float
    recomputed_p: float
    published_neglog10: float
    recomputed_neglog10: float

    @property
    def deviation(self) -> float:
        return abs(self.recomputed_neglog10 - self.published_neglog10)

    @property
    def ok(self) -> bool:
        return self.deviation <= TOLERANCE


@dataclass(frozen=True)
class Table3Report:
    comparisons: tuple[Comparison, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.comparisons)

    @property
    def max_deviation(self) -> float:
        return max(c.deviation for c in self.comparisons)

    def lines(self) -> list[str]:
        out = ["section\tid\ttest\tpublished_p\trecomputed_p\tdeviation_neglog10\tstatus"]
        for c in self.comparisons:
            out.append(
                f"{c.section}\t{c.id}\t{c.test}\t{c.published_p:.2e}\t"
                f"{format_p(c.recomputed_neglog10)}\t{c.deviation:.3f}\t{'ok' if c.ok else 'FAIL'}"
            )
        verdict = "PASS" if self.passed else "FAIL"
        out.append(f"# {verdict}: {len(self.comparisons)} comparisons, max |deviation| = "
                   f"{self.max_deviation:.3f} (tolerance {TOLERANCE})")
        return out


def validate_table3(rows=ROWS) -> Table3Report:
    comparisons = []
    for row in rows:
        counts = reconstruct_counts(row)
        for test, published in zip(columns_for(row), row.pvalues):
            result = ht.run_test(test, counts)
            comparisons.append(
                Comparison(
                    id=row.id,
                    section=row.section,
                    test=test,
                    published_p=published,
                    recomputed_p=result.p,
                    published_neglog10=-math.log10(published),
                    recomputed_neglog10=result.neglog10_p,
                )
            )
    return Table3Report(tuple(comparisons))

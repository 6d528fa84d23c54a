"""Genotype-count records and the allele-frequency / disequilibrium estimators.

Every test in :mod:`xhwe.hwe_tests` is a closed-form function of the six
sex-stratified genotype counts held by :class:`GenotypeCounts`.  Male counts
on the non-pseudoautosomal X (``Region.X_NPR``) are hemizygous: ``m0`` counts
``a`` males, ``m2`` counts ``A`` males and ``m1`` must be zero.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass
from typing import Optional

from .errors import NegativeCount, NPRMaleHeterozygote

__all__ = [
    "Region",
    "GenotypeCounts",
    "AlleleStats",
    "validate",
    "allele_stats",
    "relabel_alleles",
    "maf",
]


class Region(enum.Enum):
    AUTOSOME = "auto"
    X_NPR = "npr"
    X_PAR = "par"

    @classmethod
    def parse(cls, tag: str) -> "Region":
        """Map a free-text region tag (``npr``, ``PAR1``, ``autosome`` ...) to a Region."""
        key = tag.strip().lower().replace("-", "_")
        try:
            return _REGION_TAGS[key]
        except KeyError:
            raise ValueError(f"unknown region tag {tag!r}") from None


_REGION_TAGS = {
    "auto": Region.AUTOSOME,
    "autosome": Region.AUTOSOME,
    "autosomal": Region.AUTOSOME,
    "npr": Region.X_NPR,
    "x_npr": Region.X_NPR,
    "nonpar": Region.X_NPR,
    "non_par": Region.X_NPR,
    "par": Region.X_PAR,
    "par1": Region.X_PAR,
    "par2": Region.X_PAR,
    "x_par": Region.X_PAR,
}


@dataclass(frozen=True)
class GenotypeCounts:
    """Sex-stratified genotype counts for one bi-allelic SNP.

    Construction does not validate; call :func:`validate` on untrusted input.
    """

    region: Region
    f0: int
    f1: int
    f2: int
    m0: int
    m1: int
    m2: int
    chrom: Optional[str] = None
    pos: Optional[int] = None
    id: Optional[str] = None
    ref: Optional[str] = None
    alt: Optional[str] = None

    @classmethod
    def npr(cls, female, male, **meta) -> "GenotypeCounts":
        """Build an X-NPR record from ``(f0, f1, f2)`` and ``(m0, m2)`` or ``(m0, 0, m2)``."""
        male = tuple(male)
        if len(male) == 2:
            male = (male[0], 0, male[1])
        return cls(Region.X_NPR, *female, *male, **meta)

    @classmethod
    def diploid(cls, female, male=(0, 0, 0), region=Region.AUTOSOME, **meta) -> "GenotypeCounts":
        return cls(region, *female, *male, **meta)

    @property
    def female(self) -> tuple[int, int, int]:
        return (self.f0, self.f1, self.f2)

    @property
    def male(self) -> tuple[int, int, int]:
        return (self.m0, self.m1, self.m2)

    @property
    def f(self) -> int:
        return self.f0 + self.f1 + self.f2

    @property
    def m(self) -> int:
        return self.m0 + self.m1 + self.m2

    @property
    def pooled(self) -> tuple[int, int, int]:
        """Sex-combined genotype counts ``(n0, n1, n2)``."""
        return (self.f0 + self.m0, self.f1 + self.m1, self.f2 + self.m2)

    @property
    def n(self) -> int:
        return self.f + self.m


@dataclass(frozen=True)
class AlleleStats:
    """Per-SNP estimates; fields depending on an absent sex are ``None``."""

    p_f: Optional[float]
    p_m: Optional[float]
    p_pooled: Optional[float]
    delta_f: Optional[float]
    delta_m: Optional[float]
    rho_f: Optional[float]
    rho_m: Optional[float]
    sdmaf: Optional[float]


def validate(counts: GenotypeCounts) -> GenotypeCounts:
    """Return ``counts`` unchanged if all record invariants hold, else raise."""
    for name in ("f0", "f1", "f2", "m0", "m1", "m2"):
        value = getattr(counts, name)
        if value < 0:
            raise NegativeCount(f"{name} = {value} is negative")
        if int(value) != value:
            raise NegativeCount(f"{name} = {value} is not an integer count")
    if counts.region is Region.X_NPR and counts.m1 != 0:
        raise NPRMaleHeterozygote(
            f"X-NPR males are hemizygous but m1 = {counts.m1}"
        )
    return counts


def _scaled(delta, p):
    if delta is None or p is None or p <= 0.0 or p >= 1.0:
        return None
    return delta / (p * (1.0 - p))


def allele_stats(counts: GenotypeCounts) -> AlleleStats:
    """Allele frequencies of ``A``, HWD measures and the sdMAF estimate.

    Monomorphic samples still get estimates; tests raise ``DegenerateLocus``.
    """
    f, m = counts.f, counts.m
    npr = counts.region is Region.X_NPR

    p_f = delta_f = None
    if f > 0:
        p_f = (counts.f1 + 2 * counts.f2) / (2 * f)
        delta_f = counts.f2 / f - p_f * p_f

    p_m = delta_m = None
    if m > 0:
        if npr:
            p_m = counts.m2 / m
        else:
            p_m = (counts.m1 + 2 * counts.m2) / (2 * m)
            delta_m = counts.m2 / m - p_m * p_m

    if npr:
        alleles = 2 * f + m
        p_pooled = (counts.f1 + 2 * counts.f2 + counts.m2) / alleles if alleles else None
    else:
        n0, n1, n2 = counts.pooled
        n = n0 + n1 + n2
        p_pooled = (n1 + 2 * n2) / (2 * n) if n else None

    sdmaf = p_f - p_m if p_f is not None and p_m is not None else None
    return AlleleStats(
        p_f=p_f,
        p_m=p_m,
        p_pooled=p_pooled,
        delta_f=delta_f,
        delta_m=delta_m,
        rho_f=_scaled(delta_f, p_f),
        rho_m=_scaled(delta_m, p_m),
        sdmaf=sdmaf,
    )


def relabel_alleles(counts: GenotypeCounts) -> GenotypeCounts:
    """Swap the roles of alleles ``a`` and ``A``; an involution.

    Locus metadata (including ref/alt labels) is carried over untouched.
    """
    return dataclasses.replace(
        counts,
        f0=counts.f2,
        f2=counts.f0,
        m0=counts.m2,
        m2=counts.m0,
    )


def maf(p: Optional[float]) -> Optional[float]:
    if p is None:
        return None
    return min(p, 1.0 - p)

"""Null distributions: central chi-square and the chi2_1 + w * chi2_1 mixture.

All survival functions have a log-scale twin so that p-values far below the
double-precision range (1e-152 and far beyond) keep
their exponent.  The mixture is evaluated deterministically by quadrature;
the Monte Carlo routines at the bottom are the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize, special

from . import rng
from .errors import AlphaOutOfRange, InvalidDf, NegativeStatistic, WeightOutOfRange

__all__ = [
    "NullSpec",
    "ChiSq",
    "Mixture",
    "chisq_sf",
    "chisq_logsf",
    "chisq_isf",
    "mixture_sf",
    "mixture_logsf",
    "mixture_pdf",
    "mixture_quantile",
    "mc_mixture_draws",
    "mc_mixture_sf",
    "mc_mixture_quantile",
    "neglog10",
]

_LN10 = math.log(10.0)
_SQRT2 = math.sqrt(2.0)
_TWO_OVER_SQRT_2PI = 2.0 / math.sqrt(2.0 * math.pi)


def _check_x(x):
    if not x >= 0.0:  # also rejects NaN
        raise NegativeStatistic(f"statistic must be >= 0, got {x}")


def _check_df(df):
    if int(df) != df or df < 1:
        raise InvalidDf(f"degrees of freedom must be a positive integer, got {df}")


def _check_w(w):
    if not 0.0 <= w <= 1.0:
        raise WeightOutOfRange(f"mixture weight must lie in [0, 1], got {w}")


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"alpha must lie in (0, 1), got {alpha}")


# -- central chi-square ------------------------------------------------------


def _log_gammaincc_cf(a, x):
    # modified Lentz evaluation of the continued fraction for Q(a, x), x > a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return -x + a * math.log(x) - special.gammaln(a) + math.log(h)


def chisq_logsf(x: float, df: int) -> float:
    """Natural log of P(chi2_df > x), accurate far below double underflow."""
    _check_df(df)
    _check_x(x)
    if x == 0.0:
        return 0.0
    if df == 1:
        z = math.sqrt(x / 2.0)
        if z < 1.0:
            return math.log(special.erfc(z))
        return math.log(special.erfcx(z)) - z * z
    if df == 2:
        return -x / 2.0
    a, half = df / 2.0, x / 2.0
    q = special.gammaincc(a, half)
    if q > 1e-280 or half <= a + 1.0:
        return math.log(q) if q > 0.0 else -math.inf
    return _log_gammaincc_cf(a, half)


def chisq_sf(x: float, df: int) -> float:
    """P(chi2_df > x); closed forms for df = 1, 2, incomplete gamma otherwise."""
    _check_df(df)
    _check_x(x)
    if df == 1:
        return float(special.erfc(math.sqrt(x / 2.0)))
    if df == 2:
        return math.exp(-x / 2.0)
    return float(special.gammaincc(df / 2.0, x / 2.0))


def chisq_isf(alpha: float, df: int) -> float:
    _check_df(df)
    _check_alpha(alpha)
    if df == 2:
        return -2.0 * math.log(alpha)
    return float(special.gammainccinv(df / 2.0, alpha) * 2.0)


# -- chi2_1 + w * chi2_1 -----------------------------------------------------


def _mixture_scaled_sf(x, w):
    """S with P(X1 + w X2 > x) = exp(-x/2) * S, for 0 < w <= 1 and x > 0.

    Conditioning on X2 = U**2 (U half-normal) gives
    P = P(U > s) + int_0^s 2 phi(u) erfc(sqrt((x - w u^2) / 2)) du, s = sqrt(x / w);
    pulling exp(-x/2) out of both terms leaves erfcx factors that cannot underflow.
    """
    s = math.sqrt(x / w)
    shrink = 1.0 - w

    def integrand(u):
        rest = max(x - w * u * u, 0.0)
        return _TWO_OVER_SQRT_2PI * math.exp(-0.5 * shrink * u * u) * special.erfcx(
            math.sqrt(rest / 2.0)
        )

    # the integrand is below exp(-shrink u^2 / 2); past shrink u^2 = 1600 it is
    # negligible, which also keeps the range finite when x / w overflows
    upper, points = s, None
    if shrink > 0.0:
        upper = min(s, 40.0 / math.sqrt(shrink))
        knee = 8.0 / math.sqrt(shrink)
        if knee < upper:
            points = [knee]
    inner, _ = integrate.quad(
        integrand, 0.0, upper, epsabs=0.0, epsrel=1e-13, limit=500, points=points
    )
    outer = special.erfcx(s / _SQRT2) * math.exp(-0.5 * x * (1.0 / w - 1.0))
    return inner + outer


def mixture_logsf(x: float, w: float) -> float:
    """Natural log of P(X1 + w * X2 > x) with X1, X2 iid chi2_1."""
    _check_w(w)
    _check_x(x)
    if x == 0.0:
        return 0.0
    if w == 0.0:
        return chisq_logsf(x, 1)
    return -x / 2.0 + math.log(_mixture_scaled_sf(x, w))


def mixture_sf(x: float, w: float) -> float:
    """P(X1 + w * X2 > x) with X1, X2 iid chi2_1 (absolute error well below 1e-10)."""
    _check_w(w)
    _check_x(x)
    if x == 0.0:
        return 1.0
    if w == 0.0:
        return chisq_sf(x, 1)
    return min(1.0, math.exp(-x / 2.0) * _mixture_scaled_sf(x, w))


def mixture_pdf(x: float, w: float) -> float:
    """Density of X1 + w * X2 for 0 < w <= 1, via the Bessel-I0 closed form."""
    _check_w(w)
    if w == 0.0:
        raise WeightOutOfRange("density of the w = 0 mixture is the chi2_1 density")
    if x <= 0.0:
        return 0.0
    return math.exp(-x / 2.0) * special.i0e((1.0 - w) * x / (4.0 * w)) / (2.0 * math.sqrt(w))


def mixture_quantile(alpha: float, w: float) -> float:
    """Upper ``alpha`` critical value of chi2_1 + w * chi2_1 by root finding.

    The root is bracketed by the chi2_1 and chi2_2 critical values, since the
    survival function is nondecreasing in ``w``.
    """
    _check_alpha(alpha)
    _check_w(w)
    lo, hi = chisq_isf(alpha, 1), chisq_isf(alpha, 2)
    if w == 0.0:
        return lo
    target = math.log(alpha)

    def gap(x):
        return mixture_logsf(x, w) - target

    lo *= 1.0 - 1e-9
    hi *= 1.0 + 1e-9
    return optimize.brentq(gap, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=200)


# -- Monte Carlo oracle ------------------------------------------------------

_MC_STREAM = rng.stream_id("mc_mixture")


def mc_mixture_draws(w: float, draws: int, seed: int) -> np.ndarray:
    """``draws`` samples of X1 + w * X2, deterministic in ``seed``."""
    _check_w(w)
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    gen = rng.generator(seed, _MC_STREAM)
    z = gen.standard_normal((2, draws))
    np.square(z, out=z)
    z[1] *= w
    return z[0] + z[1]


def mc_mixture_sf(x: float, w: float, draws: int, seed: int) -> tuple[float, float]:
    """Empirical tail frequency and its binomial standard error."""
    sample = mc_mixture_draws(w, draws, seed)
    p = float(np.count_nonzero(sample > x)) / draws
    return p, math.sqrt(p * (1.0 - p) / draws)


def mc_mixture_quantile(alpha: float, w: float, draws: int, seed: int) -> float:
    """Empirical (1 - alpha) quantile of ``draws`` mixture samples."""
    _check_alpha(alpha)
    sample = mc_mixture_draws(w, draws, seed)
    return float(np.quantile(sample, 1.0 - alpha))


def neglog10(logp: float) -> float:
    """-log10 p from a natural-log p-value; never negative."""
    return max(0.0, -logp / _LN10)


# -- NullSpec ----------------------------------------------------------------


class NullSpec:
    """Reference distribution of a test statistic."""

    def sf(self, x: float) -> float:
        raise NotImplementedError

    def logsf(self, x: float) -> float:
        raise NotImplementedError

    def isf(self, alpha: float) -> float:
        raise NotImplementedError

    def neglog10_sf(self, x: float) -> float:
        return neglog10(self.logsf(x))


@dataclass(frozen=True)
class ChiSq(NullSpec):
    df: int

    def __post_init__(self):
        _check_df(self.df)

    def sf(self, x):
        return chisq_sf(x, self.df)

    def logsf(self, x):
        return chisq_logsf(x, self.df)

    def isf(self, alpha):
        return chisq_isf(alpha, self.df)

    def __str__(self):
        return f"chisq:{self.df}"


@dataclass(frozen=True)
class Mixture(NullSpec):
    """X1 + w * X2 with X1, X2 independent chi2_1."""

    w: float

    def __post_init__(self):
        _check_w(self.w)

    def sf(self, x):
        return mixture_sf(x, self.w)

    def logsf(self, x):
        return mixture_logsf(x, self.w)

    def isf(self, alpha):
        return mixture_quantile(alpha, self.w)

    def __str__(self):
        return f"mixture:{self.w:.6g}"


def parse_null(text: str) -> NullSpec:
    """Parse ``chisq:<df>`` or ``mixture:<w>``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if kind in ("chisq", "chi2"):
        return ChiSq(int(arg))
    if kind in ("mixture", "mix"):
        return Mixture(float(arg))
    raise ValueError(f"unknown null specification {text!r}")

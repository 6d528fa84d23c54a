import numpy as np
import pytest
from hypothesis import assume
from hypothesis import strategies as st

from xhwe import GenotypeCounts, Region

# Identity checks compare statistics to 1e-10 relative; the absolute floor
# only matters for samples sitting exactly at equilibrium (statistic ~ 0).
REL = 1e-10
ABS = 1e-12


def close(a, b, rel=REL, abs_=ABS):
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_)


def fuzz_counts(region, n_cases, seed):
    """Random valid count vectors; sample sizes and genotype mixes vary widely."""
    gen = np.random.default_rng(seed)
    out = []
    while len(out) < n_cases:
        f = int(gen.integers(2, 4000))
        m = int(gen.integers(2, 4000))
        fem = tuple(int(v) for v in gen.multinomial(f, gen.dirichlet([0.7, 0.7, 0.7])))
        if region is Region.X_NPR:
            m2 = int(gen.binomial(m, gen.uniform(0.02, 0.98)))
            male = (m - m2, 0, m2)
        elif region is Region.X_PAR:
            male = tuple(int(v) for v in gen.multinomial(m, gen.dirichlet([0.7, 0.7, 0.7])))
        else:
            male = (0, 0, 0)
        c = GenotypeCounts(region, *fem, *male)
        # the identities concern samples polymorphic in every sex present
        p_f = (fem[1] + 2 * fem[2]) / (2 * f)
        if region is Region.X_NPR:
            p_m = male[2] / m
        elif region is Region.X_PAR:
            p_m = (male[1] + 2 * male[2]) / (2 * m)
        else:
            p_m = 0.5
        if 0.0 < p_f < 1.0 and 0.0 < p_m < 1.0:
            out.append(c)
    return out


@st.composite
def diploid_triples(draw, min_n=1, max_n=5000):
    n = draw(st.integers(min_n, max_n))
    a = draw(st.integers(0, n))
    b = draw(st.integers(0, n - a))
    return (a, b, n - a - b)


@st.composite
def npr_counts(draw, max_n=3000, polymorphic=True):
    fem = draw(diploid_triples(min_n=1, max_n=max_n))
    m = draw(st.integers(1, max_n))
    m2 = draw(st.integers(0, m))
    c = GenotypeCounts.npr(fem, (m - m2, m2))
    if polymorphic:
        p_f = (fem[1] + 2 * fem[2]) / (2 * sum(fem))
        assume(0.0 < p_f < 1.0)
    return c


@st.composite
def par_counts(draw, max_n=3000):
    fem = draw(diploid_triples(min_n=1, max_n=max_n))
    mal = draw(diploid_triples(min_n=1, max_n=max_n))
    return GenotypeCounts.diploid(fem, mal, region=Region.X_PAR)


@pytest.fixture
def rs6655837():
    return GenotypeCounts.npr((86, 228, 22), (222, 94), id="rs6655837")


# -- acceptance report ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

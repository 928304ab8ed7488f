import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from recgrow.arith import Poly, RatFunc
from recgrow.recurrence import PowerSumSpec

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

X = RatFunc.x()
PX = Poly.x()


def rf(num, den=(1,)):
    """Rational function from ascending integer/Fraction coefficient lists."""
    return RatFunc(Poly(num), Poly(den))


# non-degenerate power sums used across modules
CORPUS = {
    "worked": PowerSumSpec.of(([X + 1], X), ([X], X + 1)),
    "single": PowerSumSpec.of(([X + 1], X),),
    "cube": PowerSumSpec.of(([1], X ** 3),),
    "collision": PowerSumSpec.of(([X], X), ([1], X ** 2)),
    "rational_alpha": PowerSumSpec.of(([1, X], (X + 1) / X), ([2], X - 3)),
    "three_terms": PowerSumSpec.of(([1], X), ([1], X + 1), ([Fraction(1, 2), 1], X ** 2 + 1)),
    "poly_coeff": PowerSumSpec.of(([X, 0, 1], 2 * X), ([Fraction(-1, 3)], X ** 2 - 2)),
}


@pytest.fixture(params=sorted(CORPUS))
def corpus_spec(request):
    return CORPUS[request.param]


coeff = st.integers(-9, 9)


@st.composite
def polys(draw, max_degree=6, nonzero=False):
    cs = draw(st.lists(coeff, max_size=max_degree + 1))
    p = Poly(cs)
    if nonzero and p.is_zero():
        p = Poly((draw(st.integers(1, 9)),))
    return p


@st.composite
def ratfuncs(draw, max_degree=6, nonzero=True):
    num = draw(polys(max_degree, nonzero=nonzero))
    den = draw(polys(max_degree, nonzero=True))
    return RatFunc(num, den)


def random_poly(rng: random.Random, max_degree: int, lo=-9, hi=9, nonzero=True) -> Poly:
    while True:
        d = rng.randint(0, max_degree)
        p = Poly([rng.randint(lo, hi) for _ in range(d + 1)])
        if not (nonzero and p.is_zero()):
            return p


def random_ratfunc(rng: random.Random, max_degree: int) -> RatFunc:
    return RatFunc(random_poly(rng, max_degree), random_poly(rng, max_degree))


# ---------------------------------------------------------------- session hooks

def pytest_configure(config):
    import time

    config._recgrow_t0 = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so it can time the whole session
    items.sort(key=lambda it: it.fspath.basename == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    reports = terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
    ran = {int(rep.nodeid.split("test_criterion_")[1][:2]) for rep in reports
           if "test_criterion_" in rep.nodeid}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ran):
        ok, detail = mod.RESULTS.get(num, (False, "did not complete"))
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

import random

import pytest
from gmpy2 import mpq
from hypothesis import settings, strategies as st

from goldturaev.algebra import Series, Signature
from goldturaev.cyclic import CyclicSeries
from goldturaev.framing import FramingData

settings.register_profile("gt", max_examples=40, deadline=None)
settings.load_profile("gt")


def ser(sig, text, valid=float("inf")):
    return Series.parse(sig, text, valid)


def cyc(sig, text, valid=float("inf")):
    return CyclicSeries.parse(sig, text, valid)


def framings(sig):
    """Adapted framing plus two non-adapted ones."""
    n, g = sig.n, sig.g
    return [
        FramingData.adapted(sig),
        FramingData(sig, [0] * n, [1] * g, [0] * g),
        FramingData(sig, [2 - j for j in range(n)], [0] * g, [-2] * g),
    ]


SIGNATURES = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 0)]


@st.composite
def series_st(draw, sig, max_deg=4, max_terms=4, augmented=False):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        d = rng.randint(1 if augmented else 0, max_deg)
        words = sig.words_of_degree(d)
        if not words:
            continue
        terms[rng.choice(words)] = rng.randint(-3, 3)
    return Series(sig, terms)


@pytest.fixture
def rng():
    return random.Random(20261019)


def random_tder(sig, rng, shifts=(1, 2, 3), density=2):
    """Random element of tder+ built from the Lyndon basis of each shift."""
    from goldturaev.kv import tder_basis
    from goldturaev.tangential import TDerElement

    u = TDerElement.zero(sig)
    for s in shifts:
        basis = tder_basis(sig, s)
        for _ in range(min(density, len(basis))):
            c = rng.choice([-2, -1, 1, 2, mpq(1, 2)])
            u = u + rng.choice(basis).scale(c)
    return u


def random_taut(sig, rng, N, shifts=(1, 2, 3)):
    from goldturaev.tangential import taut_exp

    return taut_exp(random_tder(sig, rng, shifts), N)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from goldturaev.algebra import Series, Signature, exp, is_group_like, log, xi
from goldturaev.cyclic import CyclicSeries, wedge
from goldturaev.errors import NotSpecial, ZeroElement
from goldturaev.expansions import (
    Expansion, FreeGroupWord, GroupRingElement, boundary_power_formula, expansion_eval, is_special,
    loop_bracket, loop_cobracket, loop_log, loop_trace, theta_exp_eval, twisted_cobracket,
    twisted_cobracket_genus0, weight,
)
from goldturaev.framing import FramingData
from goldturaev.kv import KvProblem, kv_solve
from goldturaev.loops import goldman_bracket_gr, turaev_cobracket_gr
from goldturaev.tangential import TAutElement

from conftest import cyc, ser

G1 = Signature(1, 0)
G11 = Signature(1, 1)
Z2 = Signature(0, 2)


def word(sig, text):
    return FreeGroupWord.parse(sig, text)


def ring(sig, *pairs):
    out = GroupRingElement(sig)
    for text, c in pairs:
        out = out + GroupRingElement.of(word(sig, text), c)
    return out


def test_parse_and_reduce():
    w = word(G11, "a1 b1 B1 A1 c1")
    assert str(w) == "c1"
    assert str(word(G11, "a1 b1").inverse()) == "B1 A1"
    assert str(FreeGroupWord.gamma0(G11)) == "a1 b1 A1 B1 c1"
    assert len(word(G1, "a1") ** 3) == 3
    with pytest.raises(ValueError):
        word(G1, "d1")


def test_theta_exp_examples():
    x = Series.letter(G1, G1.x(1))
    assert theta_exp_eval(word(G1, "a1"), 6) == exp(x, 6)
    assert theta_exp_eval(word(G1, "a1 A1"), 6) == Series.unit(G1, 6)
    assert log(theta_exp_eval(FreeGroupWord.gamma0(G1), 6), 6) == xi(G1, 6)


def test_weight_examples():
    assert weight(ring(G11, ("a1", 1), ("1", -1))) == 1
    assert weight(ring(G11, ("c1", 1), ("1", -1))) == 2
    prod = ring(G11, ("a1", 1), ("1", -1)) * ring(G11, ("c1", 1), ("1", -1))
    assert weight(prod) == 3
    # a commutator minus 1 sits in weight 2
    assert weight(ring(G1, ("a1 b1 A1 B1", 1), ("1", -1))) == 2
    with pytest.raises(ZeroElement):
        weight(GroupRingElement(G1))


def test_special_examples():
    assert is_special(Expansion.exponential(Signature(0, 1), 6))
    E = Expansion.exponential(G1, 5)
    assert not is_special(E)
    assert E.kvI_defect().low_degree() == 3


def test_loop_log_examples():
    assert loop_log(word(G1, "a1"), None, 6) == cyc(G1, "|x1|").with_valid(6)
    assert not loop_log(word(G1, "a1 b1 A1 B1"), None, 8)
    assert loop_log(word(G1, "a1 b1"), None, 6) == cyc(G1, "|x1| + |y1|").with_valid(6)


@pytest.fixture(scope="module")
def kv_11():
    sig = G11
    f = FramingData(sig, [0], [0], [0])
    report = kv_solve(KvProblem(sig, f, 3))
    assert report.status == "Solved"
    return report.F, f


@pytest.fixture(scope="module")
def kv_02():
    f = FramingData(Z2, [0, -1])
    reports = [kv_solve(KvProblem(Z2, f, 4), seed=s) for s in (None, 3)]
    assert all(r.status == "Solved" for r in reports)
    assert not reports[0].F == reports[1].F
    return [r.F for r in reports], f


def test_loop_bracket_examples(kv_11):
    F, _ = kv_11
    E = Expansion(F)
    N = 3
    a, b, c = word(G11, "a1"), word(G11, "b1"), word(G11, "c1")
    assert not loop_bracket(a, a, E, N)
    assert not loop_bracket(c, a * b, E, N)
    out = loop_bracket(a, b, E, N)
    assert out.component(0) == CyclicSeries.one(G11)
    with pytest.raises(NotSpecial):
        loop_bracket(a, b, Expansion.exponential(G1, 5), 3)


def test_loop_bracket_transport(kv_02):
    (F1, F2), _ = kv_02
    E1, E2 = Expansion(F1), Expansion(F2)
    T = F2.inverse() @ F1
    v, w = word(Z2, "c1 c2"), word(Z2, "c2 c1 c1")
    N = 4
    lhs = loop_bracket(v, w, E2, N)
    assert lhs == T.act(loop_bracket(v, w, E1, N)).truncate(N)


def test_twisted_cobracket_equals_graded(kv_02):
    (F1, F2), f = kv_02
    ops = [twisted_cobracket(F, f) for F in (F1, F2)]
    short = twisted_cobracket_genus0(F1, f)
    rng = random.Random(11)
    from goldturaev.loops import random_cyclic

    for _ in range(10):
        P = random_cyclic(Z2, rng.randint(1, 6), rng)
        ref = turaev_cobracket_gr(P, f).truncate(4)
        assert all(op(P) == ref for op in ops)
        assert short(P) == ref


def test_twisted_cobracket_rejects_non_special():
    with pytest.raises(NotSpecial):
        twisted_cobracket(TAutElement.identity(G1, 5), FramingData.adapted(G1))


@pytest.mark.parametrize("rot", [-1, 0, 2])
def test_log_square_formula(rot):
    f = FramingData(Z2, [rot, -1])
    F = kv_solve(KvProblem(Z2, f, 4), kvI_only=True).F
    E = Expansion(F)
    lg = log(expansion_eval(E, word(Z2, "c1"), 6), 6)
    half_sq = CyclicSeries(Z2, (lg * lg).scale(mpq(1, 2)).terms, 6)
    out = twisted_cobracket(F, f)(half_sq).truncate(4)
    assert out == wedge(CyclicSeries.one(Z2), CyclicSeries(Z2, lg.terms, 4)).scale(rot).truncate(4)


def test_loop_cobracket_boundary_powers():
    f = FramingData(Z2, [2, -1])
    F = kv_solve(KvProblem(Z2, f, 4), kvI_only=True).F
    for m in (1, 2, 3):
        out = loop_cobracket(FreeGroupWord.generator(Z2, Z2.z(1), m), F, f, 4)
        assert out == boundary_power_formula(Z2, 1, m, 2, 4)
    assert not loop_cobracket(FreeGroupWord.identity(Z2), F, f, 4)


@given(st.integers(0, 10**6))
def test_theta_is_multiplicative_and_group_like(seed):
    rng = random.Random(seed)
    gens = ["a1", "b1", "c1", "A1", "B1", "C1"]
    v = word(G11, " ".join(rng.choice(gens) for _ in range(rng.randint(0, 4))))
    w = word(G11, " ".join(rng.choice(gens) for _ in range(rng.randint(0, 4))))
    N = 5
    assert theta_exp_eval(v * w, N) == (theta_exp_eval(v, N) * theta_exp_eval(w, N)).truncate(N)
    assert is_group_like(theta_exp_eval(v, N))


@given(st.integers(0, 10**6))
def test_weight_is_superadditive(seed):
    rng = random.Random(seed)
    gens = ["a1", "b1", "c1", "A1", "B1", "C1"]

    def aug():
        w = word(G11, " ".join(rng.choice(gens) for _ in range(rng.randint(1, 3))))
        if not w.letters:
            w = word(G11, "c1")
        return GroupRingElement.of(w) - GroupRingElement.one(G11)

    a, b = aug(), aug()
    ab = a * b
    if ab:
        assert weight(ab) >= weight(a) + weight(b)

import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from goldturaev.algebra import Series, Signature, bch, bracket, exp
from goldturaev.cyclic import CyclicSeries, co_counit_first, delta_tilde, tensor_cyclic, wedge
from goldturaev.errors import GenusNotZero, NotPositiveDegree
from goldturaev.framing import FramingData
from goldturaev.tangential import (
    C_q, J_cocycle, TAutElement, TDerElement, c_q, coboundary, div, div_cocycle_group, gdiv_f,
    integrate_cocycle, j_cocycle, j_q, pullback_cocycle, r_coefficients, taut_adjoint, taut_exp,
    taut_log, tder_apply, tder_bracket, tdiv,
)

from conftest import cyc, framings, random_taut, random_tder, ser

Z2 = Signature(0, 2)
Z3 = Signature(0, 3)
G1 = Signature(1, 0)
G11 = Signature(1, 1)
SEEDS = st.integers(0, 10**6)


def tang(sig, j, text):
    t = [Series.zero(sig)] * sig.n
    t[j - 1] = ser(sig, text)
    return TDerElement(sig, None, t)


def test_div_examples():
    assert not div(tang(Z2, 1, "z2"))
    assert div(tang(Z2, 1, "z1")) == cyc(Z2, "|z1|")
    # u_1 = z1 z2 has no right z_1-part
    assert not div(tang(Z2, 1, "z1 z2"))
    assert div(tang(Z2, 1, "z2 z1")) == cyc(Z2, "|z1 z2|")
    with pytest.raises(GenusNotZero):
        div(TDerElement.zero(G1))


def test_tdiv_examples():
    one = CyclicSeries.one(Z2)
    z1 = cyc(Z2, "|z1|")
    assert tdiv(tang(Z2, 1, "z1")) == tensor_cyclic(z1, one) - tensor_cyclic(one, z1)
    u = TDerElement(G1, {G1.x(1): ser(G1, "x1 y1 - y1 x1")})
    one, y = CyclicSeries.one(G1), cyc(G1, "|y1|")
    assert tdiv(u) == tensor_cyclic(one, y) - tensor_cyclic(y, one)


def test_c_q_examples():
    f = FramingData(Z2, [0, -1])
    assert f.q(1) == 1
    assert c_q(tang(Z2, 1, "z2"), f) == cyc(Z2, "|z2|")
    assert not c_q(tang(Z2, 1, "z2"), FramingData.adapted(Z2))


def test_r_series_against_sympy():
    s = sympy.symbols("s")
    ref = sympy.series(sympy.log((sympy.exp(s) - 1) / s), s, 0, 9).removeO()
    ours = r_coefficients(8)
    for k in range(9):
        c = sympy.Rational(ref.coeff(s, k))
        assert mpq(int(c.p), int(c.q)) == ours[k]
    assert ours[1] == mpq(1, 2) and ours[2] == mpq(1, 24) and ours[3] == 0


def test_gdiv_reduces_to_tdiv_in_genus0_without_q():
    rng = random.Random(1)
    u = random_tder(Z3, rng)
    assert gdiv_f(u, FramingData.adapted(Z3)) == tdiv(u)


def test_tder_examples():
    rng = random.Random(2)
    u = random_tder(Z2, rng)
    assert tder_bracket(u, u).is_zero()
    for j in range(1, 3):
        assert not tder_apply(u, cyc(Z2, f"|z{j}|"))


def test_taut_exp_examples():
    sig = Z2
    assert taut_exp(TDerElement.zero(sig), 6).is_identity()
    u = tang(sig, 1, "z1 z1 - 1/2 z1")
    F = taut_exp(u, 6)
    assert F.tangential[0] == u.tangential[0].with_valid(4)
    with pytest.raises(NotPositiveDegree):
        taut_exp(TDerElement(G1, {0: ser(G1, "x1")}), 4)


def test_taut_exp_derivative_recovers_u():
    # exp(tu) is polynomial in t at truncation; sample t = 0..K and read the linear coefficient
    rng = random.Random(3)
    sig, N = Z2, 5
    u = random_tder(sig, rng, (1, 2))
    K = N + 1
    samples = [taut_exp(u.scale(t), N) for t in range(K + 1)]
    ts = list(range(K + 1))
    for a in range(sig.rank):
        vals = [F.images[a] for F in samples]
        words = set().union(*(v.terms for v in vals))
        lin = {}
        for w in words:
            poly = sympy.interpolate([(t, sympy.Rational(str(v.coeff(w)))) for t, v in zip(ts, vals)], sympy.Symbol("t"))
            c = sympy.Poly(poly, sympy.Symbol("t")).coeff_monomial(sympy.Symbol("t"))
            if c:
                lin[w] = mpq(int(c.p), int(c.q))
        assert Series(sig, lin, N) == u.apply(Series.letter(sig, a)).with_valid(N)


def test_integrate_cocycle_examples():
    u = tang(Z2, 1, "z1")
    assert div(u) == cyc(Z2, "|z1|")
    assert integrate_cocycle(div, u, 6) == cyc(Z2, "|z1|")
    rng = random.Random(4)
    v = random_tder(Z3, rng, (1, 2))
    N = 6
    one = integrate_cocycle(div, v, N)
    two = integrate_cocycle(div, v.scale(2), N)
    assert two == one + taut_exp(v, N + 2).act(one).truncate(N)
    assert not integrate_cocycle(lambda w: CyclicSeries.zero(Z3), v, N)


def test_jacobian_examples():
    rng = random.Random(5)
    assert not j_cocycle(TAutElement.identity(Z3, 6))
    F = random_taut(Z3, rng, 7)
    Finv = F.inverse()
    assert j_cocycle(Finv) == -Finv.act(j_cocycle(F))


def test_pullback_identity_map():
    rng = random.Random(6)
    u = random_tder(Z2, rng)
    pulled = pullback_cocycle(TAutElement.identity(Z2, 7), tdiv)
    assert pulled(u) == tdiv(u)


def test_json_roundtrip():
    rng = random.Random(7)
    u = random_tder(G11, rng)
    assert TDerElement.from_json(u.to_json()) == u
    F = random_taut(G11, rng, 5)
    assert TAutElement.from_json(F.to_json()) == F


# property tests


@given(st.sampled_from([(0, 2), (0, 3), (1, 1)]), SEEDS)
def test_bracket_preserves_tangential_constraint(gn, seed):
    sig = Signature(*gn)
    rng = random.Random(seed)
    u, v = random_tder(sig, rng), random_tder(sig, rng)
    w = tder_bracket(u, v)
    z = Series.letter(sig, sig.z(1))
    lhs = u.apply(v.apply(z)) - v.apply(u.apply(z))
    assert lhs == bracket(z, w.tangential[0])
    assert w == -tder_bracket(v, u)


@given(st.sampled_from([(0, 2), (1, 1)]), SEEDS)
def test_group_axioms(gn, seed):
    sig, N = Signature(*gn), 5
    rng = random.Random(seed)
    F, G, H = (random_taut(sig, rng, N) for _ in range(3))
    assert F.compose(F.inverse()).is_identity()
    assert (F @ G) @ H == F @ (G @ H)
    for X in (F @ G, F.inverse()):
        assert all(not t for t in X.tangential_defect())


@given(st.sampled_from([(0, 2), (0, 3), (1, 1)]), SEEDS)
def test_exp_log_roundtrip_and_one_parameter(gn, seed):
    sig, N = Signature(*gn), 6
    rng = random.Random(seed)
    u = random_tder(sig, rng)
    F = taut_exp(u, N)
    assert taut_exp(taut_log(F), N) == F
    s, t = mpq(1, 3), mpq(-2)
    assert taut_exp(u.scale(s + t), N) == taut_exp(u.scale(s), N) @ taut_exp(u.scale(t), N)


@given(st.sampled_from([(0, 2), (1, 1)]), SEEDS)
def test_adjoint(gn, seed):
    sig, N = Signature(*gn), 6
    rng = random.Random(seed)
    F = random_taut(sig, rng, N)
    u, v = random_tder(sig, rng), random_tder(sig, rng)
    assert taut_adjoint(TAutElement.identity(sig, N), u) == u
    assert taut_adjoint(taut_exp(u, N), u) == u
    assert taut_adjoint(F, tder_bracket(u, v)) == tder_bracket(taut_adjoint(F, u), taut_adjoint(F, v))
    assert taut_exp(taut_adjoint(F, u), N) == F @ taut_exp(u, N) @ F.inverse()


def _lie_cocycle_defect(c, u, v):
    return c(tder_bracket(u, v)) - u.act(c(v)) + v.act(c(u))


@given(st.sampled_from([(0, 2), (0, 3), (1, 1), (2, 0)]), SEEDS)
def test_lie_cocycles(gn, seed):
    sig = Signature(*gn)
    rng = random.Random(seed)
    u, v = random_tder(sig, rng, (1, 2)), random_tder(sig, rng, (1, 2, 3))
    f = rng.choice(framings(sig))
    cocycles = [tdiv, lambda w: c_q(w, f), lambda w: gdiv_f(w, f, 5)]
    if sig.g == 0:
        cocycles.append(div)
    for c in cocycles:
        assert not _lie_cocycle_defect(c, u, v).truncate(5)


@given(st.sampled_from([(0, 2), (0, 3)]), SEEDS)
def test_commutative_diagram(gn, seed):
    u = random_tder(Signature(*gn), random.Random(seed), (1, 2, 3, 4, 5))
    assert delta_tilde(div(u)) == tdiv(u)


@given(st.sampled_from([(0, 2), (0, 3), (1, 1)]), SEEDS)
def test_group_cocycles(gn, seed):
    sig, N = Signature(*gn), 6
    rng = random.Random(seed)
    F, G = random_taut(sig, rng, N), random_taut(sig, rng, N)
    f = rng.choice(framings(sig))
    FG = F @ G
    for X in (J_cocycle, j_cocycle, lambda H: C_q(H, f), lambda H: j_q(H, f)):
        assert X(FG) == X(F) + F.act(X(G))
    assert delta_tilde(j_cocycle(F)) == J_cocycle(F)
    if sig.g == 0:
        assert div_cocycle_group(F) == j_cocycle(F)


@settings(max_examples=15)
@given(st.sampled_from([(0, 2), (0, 3), (1, 1)]), SEEDS)
def test_pullback_of_double_divergence(gn, seed):
    sig, N = Signature(*gn), 6
    rng = random.Random(seed)
    F = random_taut(sig, rng, N)
    u = random_tder(sig, rng, (1, 2))
    pulled = pullback_cocycle(F, tdiv)(u)
    expected = tdiv(u) + coboundary(J_cocycle(F.inverse()))(u)
    assert pulled.truncate(4) == expected.truncate(4)
    G = random_taut(sig, rng, N)
    # (FG)^* c = G^* F^* c
    lhs = pullback_cocycle(F @ G, tdiv)(u)
    rhs = pullback_cocycle(G, pullback_cocycle(F, tdiv))(u)
    assert lhs.truncate(4) == rhs.truncate(4)

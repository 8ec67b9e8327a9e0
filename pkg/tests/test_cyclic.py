import json
import random

from hypothesis import given, strategies as st

from goldturaev.algebra import Series, Signature
from goldturaev.cyclic import (
    CyclicSeries, CyclicTensor, co_counit_first, delta_tilde, delta_tilde_via_representative,
    necklace, tensor_cyclic, trace, wedge,
)

from conftest import cyc, ser, series_st

G1 = Signature(1, 0)
Z2 = Signature(0, 2)


def test_rotation_and_commutator():
    assert cyc(G1, "|x1 y1|") == cyc(G1, "|y1 x1|")
    assert not trace(ser(G1, "x1 y1 - y1 x1"))


def test_periodic_necklace_keeps_coefficient():
    P = cyc(G1, "|x1 y1 x1 y1|")
    assert list(P.terms.values()) == [1]
    assert necklace((1, 0, 1, 0)) == (0, 1, 0, 1)


def test_wedge_examples():
    P = cyc(Z2, "|z1|")
    one = CyclicSeries.one(Z2)
    assert not wedge(P, P)
    assert wedge(one, P) == tensor_cyclic(one, P) - tensor_cyclic(P, one)
    Q = cyc(Z2, "|z1 z2|")
    assert wedge(P.scale(2), Q) == wedge(P, Q).scale(2)


def test_delta_tilde_examples():
    one = CyclicSeries.one(Z2)
    z1 = cyc(Z2, "|z1|")
    assert delta_tilde(one) == tensor_cyclic(one, one)
    assert delta_tilde(z1) == tensor_cyclic(z1, one) - tensor_cyclic(one, z1)
    assert co_counit_first(tensor_cyclic(z1, one) - tensor_cyclic(one, z1)) == z1
    assert co_counit_first(tensor_cyclic(one, one)) == one


def test_json_roundtrip():
    P = cyc(G1, "|x1 y1| - 1/3 |y1| + 2", valid=5)
    assert CyclicSeries.from_json(json.loads(json.dumps(P.to_json()))) == P
    W = wedge(cyc(G1, "|x1|"), P)
    assert CyclicTensor.from_json(json.loads(json.dumps(W.to_json()))) == W


def test_from_json_accepts_plain_word_key():
    data = {"signature": {"g": 1, "n": 0}, "valid_degree": None, "terms": [{"word": ["y1", "x1"], "coeff": "2"}]}
    assert CyclicSeries.from_json(data) == cyc(G1, "2|x1 y1|")


@given(series_st(Signature(1, 1), max_deg=5))
def test_delta_tilde_independent_of_representative(a):
    rng = random.Random(len(a.terms))
    rotated = {}
    for w, c in a.terms.items():
        i = rng.randrange(len(w)) if w else 0
        rotated[w[i:] + w[:i]] = rotated.get(w[i:] + w[:i], 0) + c
    b = Series(a.sig, rotated)
    assert delta_tilde_via_representative(a) == delta_tilde_via_representative(b)
    assert delta_tilde_via_representative(a) == delta_tilde(trace(a))


@given(series_st(Signature(0, 3), max_deg=6))
def test_counit_axiom(a):
    P = trace(a)
    assert co_counit_first(delta_tilde(P)) == P


@given(st.integers(0, 3))
def test_permute_roundtrip(k):
    P = cyc(G1, "|x1| + |x1 y1|")
    T = tensor_cyclic(P, cyc(G1, "|y1|"), CyclicSeries.one(G1))
    perm = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1)][k]
    inv = tuple(perm.index(i) for i in range(3))
    assert T.permute(perm).permute(inv) == T

"""Graded Goldman bracket, framed Turaev cobracket and the action sigma.

Words are read cyclically.  For a word ``u`` and a position ``i`` the
rotation ``rot(u, i) = u[i+1:] + u[:i]`` is the word read after ``u_i``
going once around the necklace.
"""
from __future__ import annotations

import random
from functools import lru_cache

from .algebra import INF, ONE, ZERO, Series, Signature, bracket
from .cyclic import CyclicSeries, CyclicTensor, necklace, wedge
from .errors import DegreeOverflow, SignatureMismatch
from .linalg import Echelon
from .tangential import TDerElement, apply_derivation


@lru_cache(maxsize=None)
def _pair_table(sig: Signature) -> dict:
    table = {}
    for i in range(1, sig.g + 1):
        table[(sig.x(i), sig.y(i))] = 1
        table[(sig.y(i), sig.x(i))] = -1
    return table


def pair(sig: Signature, a: int, b: int) -> int:
    """Intersection pairing <a, b> on letters (zero on z letters)."""
    return _pair_table(sig).get((a, b), 0)


def zeta(sig: Signature, a: int, b: int):
    """The operation z(z_j, z_k) = delta_jk z_j; returns a letter or None."""
    return a if a == b and sig.is_z(a) else None


def _rot(u: tuple, i: int) -> tuple:
    return u[i + 1:] + u[:i]


def _out_valid(P, Q):
    return min(P.valid + Q.low_effective(), Q.valid + P.low_effective()) - 2


def _check_valid(valid):
    if valid < 0:
        raise DegreeOverflow("loop operation would leave no valid degrees")
    return valid


# ----------------------------------------------------------------------------
# bracket


@lru_cache(maxsize=1 << 18)
def _bracket_words(sig: Signature, u: tuple, v: tuple) -> tuple:
    out: dict = {}

    def add(w, c):
        k = necklace(w)
        out[k] = out.get(k, 0) + c

    table = _pair_table(sig)
    for i, a in enumerate(u):
        ru = None
        for j, b in enumerate(v):
            c = table.get((a, b), 0)
            z = a == b and sig.is_z(a)
            if not c and not z:
                continue
            if ru is None:
                ru = _rot(u, i)
            rv = _rot(v, j)
            if c:
                add(ru + rv, c)
            if z:
                add((a,) + ru + rv, 1)
                add((a,) + rv + ru, -1)
    return tuple((k, c) for k, c in out.items() if c)


def goldman_bracket_gr(P: CyclicSeries, Q: CyclicSeries) -> CyclicSeries:
    """Graded Goldman bracket on |A|; lowers degree by 2."""
    if P.sig != Q.sig:
        raise SignatureMismatch(f"{P.sig} vs {Q.sig}")
    sig = P.sig
    valid = _check_valid(_out_valid(P, Q))
    out: dict = {}
    for u, cu in P.terms.items():
        for v, cv in Q.terms.items():
            for k, c in _bracket_words(sig, u, v):
                out[k] = out.get(k, ZERO) + cu * cv * c
    return CyclicSeries(sig, out, valid, canonical=True)


# ----------------------------------------------------------------------------
# cobracket


@lru_cache(maxsize=1 << 16)
def _cobracket_word(sig: Signature, cf: tuple, u: tuple) -> tuple:
    out: dict = {}

    def add_wedge(p, q, c):
        p, q = necklace(p), necklace(q)
        if p == q:
            return
        out[(p, q)] = out.get((p, q), 0) + c
        out[(q, p)] = out.get((q, p), 0) - c

    table = _pair_table(sig)
    l = len(u)
    for j in range(l):
        for k in range(j + 1, l):
            mid = u[j + 1:k]
            rest = u[k + 1:] + u[:j]
            c = table.get((u[j], u[k]), 0)
            if c:
                add_wedge(mid, rest, c)
            if u[j] == u[k] and sig.is_z(u[j]):
                add_wedge((u[j],) + mid, rest, 1)
                add_wedge((u[j],) + rest, mid, 1)
    for i, a in enumerate(u):
        c = cf[a]
        if c:
            add_wedge((), _rot(u, i), c)
    return tuple((k, c) for k, c in out.items() if c)


def _cf_table(framing) -> tuple:
    sig = framing.sig
    return tuple(framing.c_f(a) for a in range(sig.rank))


def turaev_cobracket_gr(P: CyclicSeries, framing) -> CyclicTensor:
    """Graded framed Turaev cobracket |A| -> |A| (x) |A|; lowers degree by 2."""
    sig = P.sig
    if framing.sig != sig:
        raise SignatureMismatch("framing belongs to another signature")
    valid = _check_valid(P.valid - 2)
    cf = _cf_table(framing)
    out: dict = {}
    for u, cu in P.terms.items():
        for k, c in _cobracket_word(sig, cf, u):
            out[k] = out.get(k, ZERO) + cu * c
    return CyclicTensor(sig, out, valid, arity=2, canonical=True)


def es_part(P: CyclicSeries, framing) -> CyclicSeries:
    """The cyclic sum whose wedge with 1 is the 1-part of the framed cobracket.

    Words of length <= 1 contribute 0 (their cobracket has no 1-part).
    """
    sig = P.sig
    out: dict = {}
    table = _pair_table(sig)

    def add(w, c):
        k = necklace(w)
        out[k] = out.get(k, ZERO) + c

    for u, cu in P.terms.items():
        l = len(u)
        if l < 2:
            continue
        for i in range(l):
            a, b = u[i], u[(i + 1) % l]
            rest = tuple(u[(i + 2 + t) % l] for t in range(l - 2))
            c = table.get((a, b), 0)
            if c:
                add(rest, cu * c)
            if a == b and sig.is_z(a):
                add((a,) + rest, -cu)
            cfa = framing.c_f(a)
            if cfa:
                add((b,) + rest, cu * cfa)
    return CyclicSeries(sig, out, _check_valid(P.valid - 2), canonical=True)


def one_part(W: CyclicTensor) -> CyclicSeries:
    """Q with W = 1 ^ Q + (terms without a 1 factor), Q taken without its 1 coefficient."""
    out = {key[1]: c for key, c in W.terms.items() if key[0] == () and key[1] != ()}
    return CyclicSeries(W.sig, out, W.valid, canonical=True)


# ----------------------------------------------------------------------------
# sigma


class Derivation:
    """A derivation of A given by its letter images."""

    __slots__ = ("sig", "images", "valid")

    def __init__(self, sig, images: dict, valid=INF):
        self.sig = sig
        self.images = {a: img for a, img in images.items() if img}
        self.valid = valid

    def __call__(self, a: Series) -> Series:
        low = a.low_effective()
        valid = min(a.valid + min(0, self.valid), low + self.valid) if a.valid != INF or self.valid != INF else INF
        return apply_derivation(self.images, a, valid)

    def image(self, letter) -> Series:
        return self.images.get(letter, Series.zero(self.sig))


@lru_cache(maxsize=1 << 16)
def _sigma_word(sig: Signature, u: tuple, a: int) -> tuple:
    out: dict = {}
    table = _pair_table(sig)
    for i, b in enumerate(u):
        c = table.get((b, a), 0)
        if c:
            r = _rot(u, i)
            out[r] = out.get(r, 0) + c
        if b == a and sig.is_z(a):
            r = _rot(u, i)
            out[(a,) + r] = out.get((a,) + r, 0) + 1
            out[r + (a,)] = out.get(r + (a,), 0) - 1
    return tuple((k, c) for k, c in out.items() if c)


def _sigma_letter(P: CyclicSeries, a: int) -> Series:
    out: dict = {}
    for u, cu in P.terms.items():
        for k, c in _sigma_word(P.sig, u, a):
            out[k] = out.get(k, ZERO) + cu * c
    return Series(P.sig, out, P.valid - 2 + P.sig.weights[a])


def sigma_gr(P: CyclicSeries) -> Derivation:
    """The derivation sigma(P) of A."""
    sig = P.sig
    return Derivation(sig, {a: _sigma_letter(P, a) for a in range(sig.rank)}, P.valid - 2)


def sigma_j_gr(P: CyclicSeries, j: int) -> Series:
    """sigma_j(P) with sigma(P)(z_j) = [z_j, sigma_j(P)]."""
    sig = P.sig
    z = sig.z(j)
    out: dict = {}
    for u, cu in P.terms.items():
        for i, b in enumerate(u):
            if b == z:
                r = _rot(u, i)
                out[r] = out.get(r, ZERO) + cu
    return Series(sig, out, P.valid - 2)


def sigma_hat_gr(P: CyclicSeries) -> TDerElement:
    sig = P.sig
    images = {a: _sigma_letter(P, a) for a in range(2 * sig.g)}
    tang = [sigma_j_gr(P, j + 1) for j in range(sig.n)]
    return TDerElement(sig, images, tang, P.valid - 2)


# ----------------------------------------------------------------------------
# tensor helpers and axiom defects


def ad_tensor(P: CyclicSeries, W: CyclicTensor) -> CyclicTensor:
    """ad(P)(W_1 (x) ... (x) W_k) = sum_i W_1 (x) .. [P, W_i] .. (x) W_k."""
    sig = P.sig
    out: dict = {}
    for key, c in W.terms.items():
        for i, w in enumerate(key):
            for u, cu in P.terms.items():
                for k, c2 in _bracket_words(sig, u, w):
                    nk = key[:i] + (k,) + key[i + 1:]
                    out[nk] = out.get(nk, ZERO) + c * cu * c2
    valid = min(W.valid + P.low_effective(), P.valid + W.low_effective()) - 2
    return CyclicTensor(sig, out, valid, arity=W.arity, canonical=True)


def cobracket_slot(W: CyclicTensor, framing, slot: int = 0) -> CyclicTensor:
    """Apply the cobracket to factor ``slot`` of ``W`` (arity grows by one)."""
    sig = W.sig
    cf = _cf_table(framing)
    out: dict = {}
    for key, c in W.terms.items():
        for (a, b), c2 in _cobracket_word(sig, cf, key[slot]):
            nk = key[:slot] + (a, b) + key[slot + 1:]
            out[nk] = out.get(nk, ZERO) + c * c2
    return CyclicTensor(sig, out, W.valid - 2, arity=W.arity + 1, canonical=True)


def bracket_tensor(W: CyclicTensor) -> CyclicSeries:
    """[-, -] applied to an element of |A| (x) |A|."""
    sig = W.sig
    out: dict = {}
    for (u, v), c in W.terms.items():
        for k, c2 in _bracket_words(sig, u, v):
            out[k] = out.get(k, ZERO) + c * c2
    return CyclicSeries(sig, out, W.valid - 2, canonical=True)


def drop_one_factors(W: CyclicTensor) -> CyclicTensor:
    """Project to (|A|/K1)^{(x) k} by dropping terms with an empty factor."""
    out = {k: c for k, c in W.terms.items() if all(k)}
    return CyclicTensor(W.sig, out, W.valid, arity=W.arity, canonical=True)


def jacobi_defect(P, Q, R) -> CyclicSeries:
    br = goldman_bracket_gr
    return br(P, br(Q, R)) + br(Q, br(R, P)) + br(R, br(P, Q))


def cojacobi_defect(P: CyclicSeries, framing) -> CyclicTensor:
    """(1 + t + t^2)(delta (x) 1) delta(P), t the cyclic shift of three factors."""
    d2 = cobracket_slot(turaev_cobracket_gr(P, framing), framing, 0)
    return d2 + d2.permute((1, 2, 0)) + d2.permute((2, 0, 1))


def cocycle_defect(P, Q, framing) -> CyclicTensor:
    """delta^f[P, Q] - ad(P) delta^f Q + ad(Q) delta^f P."""
    d = turaev_cobracket_gr
    return d(goldman_bracket_gr(P, Q), framing) - ad_tensor(P, d(Q, framing)) + ad_tensor(Q, d(P, framing))


def compatibility_defect(P, Q, framing=None) -> CyclicTensor:
    """Compatibility of the unframed cobracket with the bracket, modulo 1."""
    from .framing import FramingData

    zero = FramingData(P.sig, rot_boundary=[-1] * P.sig.n, rot_alpha=[0] * P.sig.g, rot_beta=[0] * P.sig.g)
    if framing is not None and framing.sig != P.sig:
        raise SignatureMismatch("framing belongs to another signature")
    return drop_one_factors(cocycle_defect(P, Q, zero))


def involutivity_defect(P: CyclicSeries, framing) -> CyclicSeries:
    """[-, -] o delta^f (P)."""
    return bracket_tensor(turaev_cobracket_gr(P, framing))


def sigma_bracket_defect(P: CyclicSeries, Q: CyclicSeries) -> CyclicSeries:
    """|sigma(P)(q)| - [P, |q|] for the lift of Q given by its stored words."""
    lift = Series(Q.sig, Q.terms, Q.valid)
    img = sigma_gr(P)(lift)
    return CyclicSeries(Q.sig, img.terms, img.valid) - goldman_bracket_gr(P, Q)


# ----------------------------------------------------------------------------
# bases, center


@lru_cache(maxsize=None)
def cyclic_basis(sig: Signature, d: int) -> tuple:
    """Canonical necklaces of degree ``d``."""
    seen = {necklace(w) for w in sig.words_of_degree(d)}
    from .algebra import word_sort_key

    return tuple(sorted(seen, key=lambda w: word_sort_key(sig, w)))


def random_cyclic(sig: Signature, d: int, rng: random.Random, terms: int = 3) -> CyclicSeries:
    """A random homogeneous cyclic series of degree ``d`` with small integer coefficients."""
    basis = cyclic_basis(sig, d)
    if not basis:
        return CyclicSeries.zero(sig)
    out = {}
    for _ in range(terms):
        out[rng.choice(basis)] = rng.randint(-3, 3)
    return CyclicSeries(sig, out, canonical=True)


def _power_trace(a: Series, k: int) -> CyclicSeries:
    power = Series.unit(a.sig)
    for _ in range(k):
        power = power * a
    return CyclicSeries(a.sig, power.terms)


def expected_center_basis(sig: Signature, d: int) -> list:
    """Spanning set of the degree-``d`` center: 1, |omega^k|, |z_j^k| for j = 1..n.

    |(z_1 + ... + z_n)^k| is left out: it equals |omega^k| in genus 0, is
    |z_1^k| when n = 1, and is not central otherwise (k >= 2).
    """
    from .algebra import omega

    if d == 0:
        return [CyclicSeries.one(sig)]
    out = []
    if d % 2 == 0:
        k = d // 2
        out.append(_power_trace(omega(sig), k))
        for j in range(1, sig.n + 1):
            out.append(CyclicSeries(sig, {(sig.z(j),) * k: ONE}))
    return [P for P in out if P]


def _vec(P: CyclicSeries) -> dict:
    return dict(P.terms)


def span_rank(elements) -> int:
    ech = Echelon()
    for P in elements:
        ech.add(_vec(P))
    return ech.rank


def center_basis(sig: Signature, d: int, probe_degree: int | None = None) -> list:
    """Basis of the degree-``d`` center, by exact kernel computation of ad.

    ``P`` is tested against every basis necklace of degree <= ``probe_degree``
    (default ``d + 2``); extra probes can only shrink the kernel.
    """
    if probe_degree is None:
        probe_degree = d + 2
    basis = cyclic_basis(sig, d)
    probes = [b for e in range(probe_degree + 1) for b in cyclic_basis(sig, e)]
    ech = Echelon()
    for w in basis:
        col: dict = {}
        for pi, b in enumerate(probes):
            for k, c in _bracket_words(sig, w, b):
                col[(pi, k)] = col.get((pi, k), 0) + c
        ech.add({k: ONE * c for k, c in col.items() if c})
    out = []
    for comb in ech.kernel:
        out.append(CyclicSeries(sig, {basis[i]: c for i, c in comb.items()}, canonical=True))
    return out


def is_central(P: CyclicSeries, probe_degree: int | None = None) -> bool:
    """Bracket with every basis necklace of degree <= probe_degree vanishes."""
    sig = P.sig
    if probe_degree is None:
        probe_degree = max(P.degrees(), default=0) + 2
    for e in range(probe_degree + 1):
        for b in cyclic_basis(sig, e):
            if goldman_bracket_gr(P, CyclicSeries(sig, {b: ONE}, canonical=True)):
                return False
    return True


def center_matches_expected(sig: Signature, d: int, probe_degree: int | None = None) -> bool:
    found = center_basis(sig, d, probe_degree)
    expected = expected_center_basis(sig, d)
    r_found, r_exp = span_rank(found), span_rank(expected)
    return r_found == r_exp and span_rank(found + expected) == r_found


# ----------------------------------------------------------------------------
# inner membership a in [pivot, A]


def inner_membership(a: Series, pivot: Series, d: int | None = None):
    """Decide whether ``a`` lies in [pivot, A] degree by degree up to ``d``.

    Returns ``(member, witness)`` with ``a = [pivot, witness]`` through
    degree ``d`` when ``member`` is true (``witness`` is None otherwise).
    """
    sig = a.sig
    if pivot.sig != sig:
        raise SignatureMismatch("pivot from another signature")
    if not pivot.is_homogeneous() or not pivot:
        raise ValueError("pivot must be a nonzero homogeneous element")
    p = pivot.low_degree()
    if d is None:
        d = max(a.degrees(), default=0)
    witness: dict = {}
    for k in range(d + 1):
        target = a.component(k)
        if not target:
            continue
        if k < p:
            return False, None
        basis = sig.words_of_degree(k - p)
        ech = Echelon()
        for w in basis:
            ech.add(dict(bracket(pivot, Series(sig, {w: ONE})).terms))
        sol = ech.solve(dict(target.terms))
        if sol is None:
            return False, None
        for i, c in sol.items():
            witness[basis[i]] = witness.get(basis[i], ZERO) + c
    return True, Series(sig, witness)


def trace_power_test(a: Series, pivot: Series, d: int) -> bool:
    """|a pivot^l| = 0 for every l >= 1 with deg(a pivot^l) <= d (per component)."""
    p = pivot.low_degree()
    low = a.low_degree()
    if low == INF:
        return True
    power = Series.unit(a.sig)
    l = 0
    while True:
        l += 1
        if low + l * p > d:
            return True
        power = power * pivot
        prod = (a * power).truncate(d)
        if CyclicSeries(a.sig, prod.terms):
            return False


__all__ = [
    "pair", "zeta", "goldman_bracket_gr", "turaev_cobracket_gr", "es_part", "one_part", "sigma_gr",
    "sigma_j_gr", "sigma_hat_gr", "Derivation", "ad_tensor", "cobracket_slot", "bracket_tensor",
    "jacobi_defect", "cojacobi_defect", "cocycle_defect", "compatibility_defect",
    "involutivity_defect", "sigma_bracket_defect", "cyclic_basis", "random_cyclic",
    "expected_center_basis", "center_basis", "is_central", "center_matches_expected",
    "inner_membership", "trace_power_test", "span_rank",
]

"""The trace space |A| = A/[A, A] and its tensor powers.

A cyclic word is stored as its lexicographically minimal rotation.
"""
from __future__ import annotations

from functools import lru_cache

from .algebra import INF, ONE, ZERO, Series, Sparse, hopf_antipode, hopf_coproduct, q, qstr, word_sort_key


def least_rotation(word: tuple) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(word)
    if n < 2:
        return 0
    s = word + word
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:  # i == -1
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


@lru_cache(maxsize=1 << 18)
def necklace(word: tuple) -> tuple:
    """Canonical representative of the cyclic class of ``word``."""
    k = least_rotation(word)
    return word[k:] + word[:k] if k else word


class CyclicSeries(Sparse):
    """Element of |A|: keys are canonical necklaces."""

    __slots__ = ()

    def __init__(self, sig, terms=None, valid=INF, canonical=False):
        if terms and not canonical:
            merged: dict = {}
            for w, c in terms.items():
                k = necklace(tuple(w))
                merged[k] = merged.get(k, ZERO) + q(c)
            terms = merged
        super().__init__(sig, terms, valid)

    def _new(self, terms, valid):
        return CyclicSeries(self.sig, terms, valid, canonical=True)

    def key_degree(self, word):
        w = self.sig.weights
        return sum(w[a] for a in word)

    def sort_key(self, word):
        return word_sort_key(self.sig, word)

    @classmethod
    def one(cls, sig, valid=INF):
        """The class of the empty word (the constant loop)."""
        return cls(sig, {(): ONE}, valid, canonical=True)

    @classmethod
    def word(cls, sig, word, coeff=1, valid=INF):
        return cls(sig, {tuple(word): q(coeff)}, valid)

    @classmethod
    def parse(cls, sig, text, valid=INF):
        from .parsing import parse_linear

        return cls(sig, parse_linear(sig, text, cyclic=True), valid)

    def pretty(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else ("" if i == 0 else "+")
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign}{mag}" + (f"|{' '.join(self.sig.word_names(w))}|" if w else "1"))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "signature": self.sig.to_json(),
            "valid_degree": None if self.valid == INF else int(self.valid),
            "terms": [
                {"cyclic_word": self.sig.word_names(w), "coeff": qstr(c)} for w, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data, sig=None):
        from .algebra import Signature

        sig = sig or Signature.from_json(data["signature"])
        valid = data.get("valid_degree")
        terms: dict = {}
        for t in data["terms"]:
            w = necklace(sig.parse_word(t["cyclic_word"] if "cyclic_word" in t else t["word"]))
            terms[w] = terms.get(w, ZERO) + q(t["coeff"])
        return cls(sig, terms, INF if valid is None else int(valid), canonical=True)


class CyclicTensor(Sparse):
    """Element of |A|^{(x) k}; keys are tuples of ``k`` canonical necklaces."""

    __slots__ = ("arity",)

    def __init__(self, sig, terms=None, valid=INF, arity=2, canonical=False):
        self.arity = arity
        if terms and not canonical:
            merged: dict = {}
            for key, c in terms.items():
                if len(key) != arity:
                    raise ValueError(f"expected {arity} tensor factors")
                k = tuple(necklace(tuple(w)) for w in key)
                merged[k] = merged.get(k, ZERO) + q(c)
            terms = merged
        super().__init__(sig, terms, valid)

    def _new(self, terms, valid):
        return CyclicTensor(self.sig, terms, valid, arity=self.arity, canonical=True)

    def _raw(self, terms, valid):
        obj = super()._raw(terms, valid)
        obj.arity = self.arity
        return obj

    def _check(self, other):
        super()._check(other)
        if other.arity != self.arity:
            raise TypeError("tensor arity mismatch")

    @classmethod
    def zero(cls, sig, valid=INF, arity=2):
        return cls(sig, {}, valid, arity=arity)

    def key_degree(self, key):
        w = self.sig.weights
        return sum(w[a] for word in key for a in word)

    def sort_key(self, key):
        return (self.key_degree(key),) + tuple(word_sort_key(self.sig, w) for w in key)

    def permute(self, perm) -> "CyclicTensor":
        """Reorder tensor factors: new factor ``i`` is old factor ``perm[i]``."""
        out = {tuple(key[p] for p in perm): c for key, c in self.terms.items()}
        return self._raw(out, self.valid)

    def pretty(self):
        if not self.terms:
            return "0"
        names = self.sig.word_names
        parts = []
        for i, (key, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else ("" if i == 0 else "+")
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(sign + mag + "(x)".join(f"|{' '.join(names(w))}|" if w else "1" for w in key))
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "signature": self.sig.to_json(),
            "valid_degree": None if self.valid == INF else int(self.valid),
            "arity": self.arity,
            "terms": [
                {"cyclic_words": [self.sig.word_names(w) for w in key], "coeff": qstr(c)}
                for key, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data, sig=None):
        from .algebra import Signature

        sig = sig or Signature.from_json(data["signature"])
        valid = data.get("valid_degree")
        arity = int(data.get("arity", 2))
        terms: dict = {}
        for t in data["terms"]:
            key = tuple(necklace(sig.parse_word(w)) for w in t["cyclic_words"])
            terms[key] = terms.get(key, ZERO) + q(t["coeff"])
        return cls(sig, terms, INF if valid is None else int(valid), arity=arity, canonical=True)


BiCyclicSeries = CyclicTensor


def trace(a: Series) -> CyclicSeries:
    """The quotient map |.| : A -> |A|."""
    return CyclicSeries(a.sig, a.terms, a.valid)


def tensor_cyclic(*factors: CyclicSeries) -> CyclicTensor:
    """Tensor product of cyclic series."""
    sig = factors[0].sig
    lows = [f.low_effective() for f in factors]
    valid = min(f.valid + sum(lows[:i] + lows[i + 1:]) for i, f in enumerate(factors))
    acc = {(): ONE}
    for f in factors:
        if f.sig != sig:
            from .errors import SignatureMismatch

            raise SignatureMismatch("tensor factors from different signatures")
        nxt: dict = {}
        for k1, c1 in acc.items():
            for w, c2 in f.terms.items():
                k = k1 + (w,)
                nxt[k] = nxt.get(k, ZERO) + c1 * c2
        acc = nxt
    return CyclicTensor(sig, acc, valid, arity=len(factors), canonical=True)


def wedge(P: CyclicSeries, Q: CyclicSeries) -> CyclicTensor:
    """P (x) Q - Q (x) P."""
    return tensor_cyclic(P, Q) - tensor_cyclic(Q, P)


@lru_cache(maxsize=1 << 16)
def _delta_tilde_word(word: tuple) -> tuple:
    """(id (x) S) Delta on a word, traced; returns tuple of ((w1, w2), coeff)."""
    k = len(word)
    out: dict = {}
    for mask in range(1 << k):
        left = tuple(word[i] for i in range(k) if mask >> i & 1)
        right = tuple(word[i] for i in range(k) if not mask >> i & 1)
        sign = -1 if len(right) % 2 else 1
        key = (necklace(left), necklace(right[::-1]))
        out[key] = out.get(key, 0) + sign
    return tuple((key, c) for key, c in out.items() if c)


def delta_tilde(P: CyclicSeries) -> CyclicTensor:
    """(1 (x) antipode) o Delta, descended to |A| -> |A| (x) |A|."""
    out: dict = {}
    for w, c in P.terms.items():
        for key, m in _delta_tilde_word(w):
            out[key] = out.get(key, ZERO) + c * m
    return CyclicTensor(P.sig, out, P.valid, arity=2, canonical=True)


def delta_tilde_via_representative(a: Series) -> CyclicTensor:
    """Same map computed from a chosen lift ``a`` through the Hopf operations."""
    cop = hopf_coproduct(a)
    out: dict = {}
    for (w1, w2), c in cop.terms.items():
        s = hopf_antipode(Series(a.sig, {w2: ONE}))
        for w2s, c2 in s.terms.items():
            key = (w1, w2s)
            out[key] = out.get(key, ZERO) + c * c2
    return CyclicTensor(a.sig, out, a.valid, arity=2)


def co_counit_first(W: CyclicTensor) -> CyclicSeries:
    """(id (x) eps): keep the first factor where the second is the empty word."""
    out = {key[0]: c for key, c in W.terms.items() if key[1] == ()}
    return CyclicSeries(W.sig, out, W.valid, canonical=True)


def one(sig, valid=INF) -> CyclicSeries:
    return CyclicSeries.one(sig, valid)

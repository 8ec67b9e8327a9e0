"""Truncated arithmetic in the completed graded tensor algebra T^(gr H).

Letters are small integers in the canonical order
``x1 < y1 < ... < xg < yg < z1 < ... < zn``; a word is a tuple of letters.
``x``/``y`` letters have weight 1, ``z`` letters weight 2.  Coefficients
are exact rationals (``gmpy2.mpq``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

from gmpy2 import mpq

from .errors import NonAugmentedExp, NonUnitalLog, SignatureMismatch

INF = math.inf
ZERO = mpq(0)
ONE = mpq(1)

Word = tuple


def q(value) -> mpq:
    """Coerce ``value`` (int, str "p/q", Fraction, mpq) to an exact rational."""
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def qstr(value) -> str:
    return str(mpq(value))


_LETTER_RE = re.compile(r"^([xyz])(\d+)$")


@dataclass(frozen=True)
class Signature:
    """Topological type Sigma_{g,n+1}; the fundamental group is free of rank 2g+n."""

    g: int
    n: int

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError("genus and number of holes must be non-negative")
        if 2 * self.g + self.n < 1:
            raise ValueError("need 2g + n >= 1")

    @property
    def rank(self) -> int:
        return 2 * self.g + self.n

    @cached_property
    def weights(self) -> tuple:
        return tuple(1 if a < 2 * self.g else 2 for a in range(self.rank))

    def x(self, i: int) -> int:
        self._check_genus_index(i)
        return 2 * (i - 1)

    def y(self, i: int) -> int:
        self._check_genus_index(i)
        return 2 * (i - 1) + 1

    def z(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise ValueError(f"boundary index {j} out of range for n={self.n}")
        return 2 * self.g + j - 1

    def _check_genus_index(self, i):
        if not 1 <= i <= self.g:
            raise ValueError(f"genus index {i} out of range for g={self.g}")

    def is_z(self, letter: int) -> bool:
        return letter >= 2 * self.g

    def z_index(self, letter: int) -> int:
        """1-based boundary index of a z letter."""
        return letter - 2 * self.g + 1

    def degree(self, word) -> int:
        w = self.weights
        return sum(w[a] for a in word)

    def letter_name(self, letter: int) -> str:
        if letter < 2 * self.g:
            return ("x" if letter % 2 == 0 else "y") + str(letter // 2 + 1)
        return "z" + str(self.z_index(letter))

    def parse_letter(self, name: str) -> int:
        m = _LETTER_RE.match(name.strip())
        if not m:
            raise ValueError(f"bad letter {name!r}")
        kind, idx = m.group(1), int(m.group(2))
        if kind == "x":
            return self.x(idx)
        if kind == "y":
            return self.y(idx)
        return self.z(idx)

    def word_names(self, word) -> list:
        return [self.letter_name(a) for a in word]

    def parse_word(self, names) -> tuple:
        if isinstance(names, str):
            names = names.split()
        return tuple(self.parse_letter(s) for s in names)

    def words_of_degree(self, d: int) -> list:
        """All words of weighted degree exactly ``d``, in canonical order."""
        return _words_of_degree(self, d)

    def to_json(self) -> dict:
        return {"g": self.g, "n": self.n}

    @classmethod
    def from_json(cls, data) -> "Signature":
        return cls(int(data["g"]), int(data["n"]))


_WORD_CACHE: dict = {}


def _words_of_degree(sig: Signature, d: int) -> list:
    key = (sig.g, sig.n, d)
    hit = _WORD_CACHE.get(key)
    if hit is not None:
        return hit
    if d < 0:
        out = []
    elif d == 0:
        out = [()]
    else:
        out = []
        for a in range(sig.rank):
            w = sig.weights[a]
            if w <= d:
                out.extend((a,) + rest for rest in _words_of_degree(sig, d - w))
        out.sort(key=lambda word: (len(word), word))
    _WORD_CACHE[key] = out
    return out


def word_sort_key(sig: Signature, word):
    return (sig.degree(word), len(word), word)


class Sparse:
    """Shared machinery for truncated sparse linear combinations.

    Subclasses define ``key_degree``.  ``valid`` is the degree through which
    the element is exact (``INF`` for polynomials known exactly).
    """

    __slots__ = ("sig", "terms", "valid")

    def __init__(self, sig: Signature, terms=None, valid=INF):
        self.sig = sig
        self.valid = valid
        clean = {}
        if terms:
            kd = self.key_degree
            for k, c in terms.items():
                if c and kd(k) <= valid:
                    clean[k] = c if isinstance(c, type(ONE)) else q(c)
        self.terms = clean

    # subclasses override
    def key_degree(self, key) -> int:
        raise NotImplementedError

    def _new(self, terms, valid):
        return type(self)(self.sig, terms, valid)

    def _raw(self, terms, valid):
        """Construct without filtering; ``terms`` must already be clean."""
        obj = type(self).__new__(type(self))
        obj.sig = self.sig
        obj.terms = terms
        obj.valid = valid
        return obj

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    @classmethod
    def zero(cls, sig, valid=INF):
        return cls(sig, {}, valid)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, key):
        return self.terms.get(key, ZERO)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        valid = min(self.valid, other.valid)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return self._new(out, valid)

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        valid = min(self.valid, other.valid)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) - c
        return self._new(out, valid)

    def __neg__(self):
        return self._raw({k: -c for k, c in self.terms.items()}, self.valid)

    def scale(self, c):
        c = q(c)
        if not c:
            return self._raw({}, self.valid)
        return self._raw({k: c * v for k, v in self.terms.items()}, self.valid)

    def __rmul__(self, c):
        if isinstance(c, Sparse):
            return NotImplemented
        return self.scale(c)

    def __truediv__(self, c):
        return self.scale(ONE / q(c))

    def __eq__(self, other):
        if not isinstance(other, Sparse):
            return NotImplemented
        if type(other) is not type(self) or other.sig != self.sig:
            return False
        cut = min(self.valid, other.valid)
        kd = self.key_degree
        keys = set(self.terms) | set(other.terms)
        return all(self.coeff(k) == other.coeff(k) for k in keys if kd(k) <= cut)

    __hash__ = None

    def truncate(self, N):
        if N >= self.valid and all(self.key_degree(k) <= N for k in self.terms):
            return self
        kd = self.key_degree
        return self._raw({k: c for k, c in self.terms.items() if kd(k) <= N}, min(self.valid, N))

    def with_valid(self, N):
        """Same coefficients, validity set to ``N`` (drops terms above ``N``)."""
        kd = self.key_degree
        return self._raw({k: c for k, c in self.terms.items() if kd(k) <= N}, N)

    def component(self, d):
        """Homogeneous part of degree ``d``."""
        kd = self.key_degree
        return self._raw({k: c for k, c in self.terms.items() if kd(k) == d}, self.valid)

    def degrees(self) -> list:
        kd = self.key_degree
        return sorted({kd(k) for k in self.terms})

    def low_degree(self):
        """Lowest degree carrying a nonzero coefficient (``INF`` for zero)."""
        kd = self.key_degree
        return min((kd(k) for k in self.terms), default=INF)

    def low_effective(self):
        """Lowest degree that may be nonzero, counting unknown terms above ``valid``."""
        return min(self.low_degree(), self.valid + 1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero_through(self, N) -> bool:
        kd = self.key_degree
        return all(kd(k) > N for k in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def sort_key(self, key):
        return (self.key_degree(key), key)

    def __repr__(self):
        body = self.pretty()
        v = "" if self.valid == INF else f" +O({self.valid + 1})"
        return f"{type(self).__name__}({body}{v})"


def _fmt_coeff(c, first):
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    mag = "" if a == 1 else f"{a}*"
    return sign, mag


class Series(Sparse):
    """Element of A = T^(gr H) known exactly through degree ``valid``."""

    __slots__ = ()

    def key_degree(self, word):
        w = self.sig.weights
        return sum(w[a] for a in word)

    def sort_key(self, word):
        return word_sort_key(self.sig, word)

    @classmethod
    def unit(cls, sig, valid=INF):
        return cls(sig, {(): ONE}, valid)

    @classmethod
    def letter(cls, sig, letter, valid=INF):
        return cls(sig, {(letter,): ONE}, valid)

    @classmethod
    def word(cls, sig, word, coeff=1, valid=INF):
        return cls(sig, {tuple(word): q(coeff)}, valid)

    @classmethod
    def parse(cls, sig, text, valid=INF):
        """Parse ``"x1 y1 - 1/2 y1 x1 + 3"``; a bare rational is a multiple of 1."""
        from .parsing import parse_linear

        return cls(sig, parse_linear(sig, text, cyclic=False), valid)

    def __mul__(self, other):
        if not isinstance(other, Series):
            if isinstance(other, Sparse):
                return NotImplemented
            return self.scale(other)
        self._check(other)
        valid = min(self.valid + other.low_effective(), other.valid + self.low_effective())
        kd = self.key_degree
        left = [(w, c, kd(w)) for w, c in self.terms.items()]
        right = [(w, c, kd(w)) for w, c in other.terms.items()]
        out: dict = {}
        for w1, c1, d1 in left:
            for w2, c2, d2 in right:
                if d1 + d2 <= valid:
                    k = w1 + w2
                    out[k] = out.get(k, ZERO) + c1 * c2
        return Series(self.sig, out, valid)

    def counit(self):
        return self.coeff(())

    def augmented(self) -> "Series":
        """Self minus its constant term."""
        return self._raw({k: c for k, c in self.terms.items() if k}, self.valid)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            sign, mag = _fmt_coeff(c, i == 0)
            if not w:
                parts.append(f"{sign}{abs(c)}")
            else:
                parts.append(f"{sign}{mag}{' '.join(self.sig.word_names(w))}")
        return " ".join(parts)

    # JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "signature": self.sig.to_json(),
            "valid_degree": None if self.valid == INF else int(self.valid),
            "terms": [
                {"word": self.sig.word_names(w), "coeff": qstr(c)} for w, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data, sig=None) -> "Series":
        sig = sig or Signature.from_json(data["signature"])
        valid = data.get("valid_degree")
        terms: dict = {}
        for t in data["terms"]:
            w = sig.parse_word(t["word"])
            terms[w] = terms.get(w, ZERO) + q(t["coeff"])
        return cls(sig, terms, INF if valid is None else int(valid))


def bracket(a: Series, b: Series) -> Series:
    return a * b - b * a


class TensorSeries(Sparse):
    """Element of A (x) A with keys ``(word1, word2)``."""

    __slots__ = ()

    def key_degree(self, key):
        w = self.sig.weights
        return sum(w[a] for a in key[0]) + sum(w[a] for a in key[1])

    def sort_key(self, key):
        return (self.key_degree(key), word_sort_key(self.sig, key[0]), word_sort_key(self.sig, key[1]))

    def pretty(self):
        if not self.terms:
            return "0"
        names = self.sig.word_names
        parts = []
        for i, ((w1, w2), c) in enumerate(self.sorted_terms()):
            sign, _ = _fmt_coeff(c, i == 0)
            parts.append(f"{sign}{abs(c)}*({' '.join(names(w1)) or '1'} | {' '.join(names(w2)) or '1'})")
        return " ".join(parts)


def tensor(a: Series, b: Series) -> TensorSeries:
    a._check(b)
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            out[(w1, w2)] = out.get((w1, w2), ZERO) + c1 * c2
    return TensorSeries(a.sig, out, min(a.valid + b.low_effective(), b.valid + a.low_effective()))


def _word_coproduct(word):
    """Shuffle coproduct of a word: all splittings into complementary subwords."""
    k = len(word)
    out: dict = {}
    for mask in range(1 << k):
        left = tuple(word[i] for i in range(k) if mask >> i & 1)
        right = tuple(word[i] for i in range(k) if not mask >> i & 1)
        key = (left, right)
        out[key] = out.get(key, 0) + 1
    return out


def hopf_coproduct(a: Series) -> TensorSeries:
    """Coproduct making each generator primitive."""
    out: dict = {}
    for w, c in a.terms.items():
        for key, m in _word_coproduct(w).items():
            out[key] = out.get(key, ZERO) + c * m
    return TensorSeries(a.sig, out, a.valid)


def hopf_antipode(a: Series) -> Series:
    return Series(a.sig, {w[::-1]: (-c if len(w) % 2 else c) for w, c in a.terms.items()}, a.valid)


def counit(a: Series):
    return a.counit()


def is_lie_like(a: Series) -> bool:
    expected = tensor(a, Series.unit(a.sig)) + tensor(Series.unit(a.sig), a)
    return hopf_coproduct(a) == expected


def is_group_like(a: Series) -> bool:
    return hopf_coproduct(a) == tensor(a, a)


def _target_degree(a: Series, N):
    cut = a.valid if N is None else min(N, a.valid)
    if cut == INF:
        raise ValueError("a truncation degree is required for an exact polynomial argument")
    return cut


def exp(a: Series, N=None) -> Series:
    """Truncated exponential of an augmented series."""
    if a.counit():
        raise NonAugmentedExp("exp needs a series with zero constant term")
    N = _target_degree(a, N)
    a = a.truncate(N)
    result = Series.unit(a.sig, N)
    if not a.terms:
        return result
    low = a.low_degree()
    power = Series.unit(a.sig, N)
    m = 0
    while True:
        m += 1
        if m * low > N:
            break
        power = (power * a).scale(mpq(1, m))
        if not power:
            break
        result = result + power
    return result


def log(g: Series, N=None) -> Series:
    """Truncated logarithm of a series with constant term 1."""
    if g.counit() != 1:
        raise NonUnitalLog("log needs a series with constant term 1")
    N = _target_degree(g, N)
    g = g.truncate(N)
    h = g - Series.unit(g.sig)
    result = Series.zero(g.sig, N)
    if not h.terms:
        return result
    low = h.low_degree()
    power = Series.unit(g.sig, N)
    m = 0
    while True:
        m += 1
        if m * low > N:
            break
        power = power * h
        if not power:
            break
        result = result + power.scale(mpq(1 if m % 2 else -1, m))
    return result


def bch(a: Series, b: Series, N=None) -> Series:
    """log(exp(a) exp(b))."""
    cut = min(a.valid, b.valid) if N is None else N
    return log(exp(a, cut) * exp(b, cut), cut)


def power_series(coeffs, a: Series, N=None) -> Series:
    """Evaluate sum_k coeffs[k] a^k truncated at ``N`` (``a`` augmented)."""
    N = _target_degree(a, N)
    a = a.truncate(N)
    result = Series.zero(a.sig, N)
    power = Series.unit(a.sig, N)
    low = a.low_degree()
    for k, c in enumerate(coeffs):
        if k:
            if k * low > N:
                break
            power = power * a
        if c:
            result = result + power.scale(c)
    return result


def omega(sig: Signature) -> Series:
    """Sum_i [x_i, y_i] + Sum_j z_j, exact."""
    terms: dict = {}
    for i in range(1, sig.g + 1):
        x, y = sig.x(i), sig.y(i)
        terms[(x, y)] = ONE
        terms[(y, x)] = -ONE
    for j in range(1, sig.n + 1):
        terms[(sig.z(j),)] = ONE
    return Series(sig, terms)


def xi(sig: Signature, N: int) -> Series:
    """log(prod_i e^{x_i} e^{y_i} e^{-x_i} e^{-y_i} prod_j e^{z_j}) through degree N."""
    if N < 2:
        raise ValueError("xi needs truncation degree >= 2")
    prod = Series.unit(sig, N)
    for i in range(1, sig.g + 1):
        x = Series.letter(sig, sig.x(i))
        y = Series.letter(sig, sig.y(i))
        for e in (exp(x, N), exp(y, N), exp(-x, N), exp(-y, N)):
            prod = prod * e
    for j in range(1, sig.n + 1):
        prod = prod * exp(Series.letter(sig, sig.z(j)), N)
    return log(prod, N)


def graded_component(a: Sparse, d) -> Sparse:
    return a.component(d)


def homogeneous_basis(sig: Signature, d: int) -> list:
    return sig.words_of_degree(d)


def all_words_up_to(sig: Signature, N: int) -> list:
    out = []
    for d in range(N + 1):
        out.extend(sig.words_of_degree(d))
    return out


__all__ = [
    "INF", "ONE", "ZERO", "Signature", "Series", "TensorSeries", "Sparse", "bch", "bracket",
    "counit", "exp", "graded_component", "hopf_antipode", "hopf_coproduct", "is_group_like",
    "is_lie_like", "log", "omega", "power_series", "q", "qstr", "tensor", "xi",
]

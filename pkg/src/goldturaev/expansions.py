"""Free-group loops, the exponential expansion and its twists by TAut.

Generators of pi_1 are written ``a_i`` (alpha_i), ``b_i`` (beta_i) and
``c_j`` (gamma_j); a capital letter is the inverse.  The generator with
index ``k`` in the letter order x1, y1, ..., z1, ... is sent by the
exponential expansion to ``exp`` of that letter.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import ZERO, Series, Signature, exp, log, omega, q, xi
from .cyclic import CyclicSeries, CyclicTensor, wedge
from .errors import NotSpecial, SignatureMismatch, ZeroElement
from .loops import goldman_bracket_gr, sigma_hat_gr
from .tangential import TAutElement, gdiv_f, taut_adjoint

_GEN_RE = re.compile(r"^([abcABC])(\d+)$")


@dataclass(frozen=True)
class FreeGroupWord:
    """Reduced word in the free generators; letters are ``(letter_index, +-1)``."""

    sig: Signature
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(tuple(self.letters)))

    @classmethod
    def identity(cls, sig):
        return cls(sig, ())

    @classmethod
    def generator(cls, sig, letter: int, power: int = 1):
        sign = 1 if power >= 0 else -1
        return cls(sig, ((letter, sign),) * abs(power))

    @classmethod
    def parse(cls, sig: Signature, text: str) -> "FreeGroupWord":
        letters = []
        for tok in text.replace("*", " ").split():
            if tok == "1":
                continue
            m = _GEN_RE.match(tok)
            if not m:
                raise ValueError(f"bad generator {tok!r}")
            kind, idx = m.group(1), int(m.group(2))
            lower = kind.lower()
            if lower == "a":
                letter = sig.x(idx)
            elif lower == "b":
                letter = sig.y(idx)
            else:
                letter = sig.z(idx)
            letters.append((letter, -1 if kind.isupper() else 1))
        return cls(sig, tuple(letters))

    @classmethod
    def gamma0(cls, sig: Signature) -> "FreeGroupWord":
        """prod_i [alpha_i, beta_i] prod_j gamma_j."""
        letters = []
        for i in range(1, sig.g + 1):
            x, y = sig.x(i), sig.y(i)
            letters += [(x, 1), (y, 1), (x, -1), (y, -1)]
        letters += [(sig.z(j), 1) for j in range(1, sig.n + 1)]
        return cls(sig, tuple(letters))

    def __mul__(self, other: "FreeGroupWord") -> "FreeGroupWord":
        if other.sig != self.sig:
            raise SignatureMismatch("words from different signatures")
        return FreeGroupWord(self.sig, self.letters + other.letters)

    def inverse(self) -> "FreeGroupWord":
        return FreeGroupWord(self.sig, tuple((a, -e) for a, e in reversed(self.letters)))

    def __pow__(self, m: int) -> "FreeGroupWord":
        base = self if m >= 0 else self.inverse()
        return FreeGroupWord(self.sig, base.letters * abs(m))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        sig = self.sig
        out = []
        for a, e in self.letters:
            if sig.is_z(a):
                name = f"c{sig.z_index(a)}"
            else:
                name = ("a" if a % 2 == 0 else "b") + str(a // 2 + 1)
            out.append(name.upper() if e < 0 else name)
        return " ".join(out)


def _reduce(letters: tuple) -> tuple:
    stack = []
    for a, e in letters:
        if stack and stack[-1] == (a, -e):
            stack.pop()
        else:
            stack.append((a, e))
    return tuple(stack)


class GroupRingElement:
    """Finite linear combination of free-group words."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: Signature, terms=None):
        self.sig = sig
        clean: dict = {}
        for w, c in (terms or {}).items():
            c = q(c)
            clean[w] = clean.get(w, ZERO) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def of(cls, word: FreeGroupWord, coeff=1):
        return cls(word.sig, {word: coeff})

    @classmethod
    def one(cls, sig):
        return cls(sig, {FreeGroupWord.identity(sig): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return GroupRingElement(self.sig, out)

    def __neg__(self):
        return GroupRingElement(self.sig, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement(self.sig, {w: c * q(other) for w, c in self.terms.items()})
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return GroupRingElement(self.sig, out)

    def augmentation(self):
        return sum(self.terms.values(), ZERO)

    def __bool__(self):
        return bool(self.terms)


def _as_ring(w) -> GroupRingElement:
    if isinstance(w, FreeGroupWord):
        return GroupRingElement.of(w)
    if isinstance(w, str):
        raise TypeError("parse the word first")
    return w


def theta_exp_eval(w, N: int) -> Series:
    """Exponential expansion of a word or group-ring element, through degree N."""
    a = _as_ring(w)
    sig = a.sig
    cache: dict = {}
    total = Series.zero(sig, N)
    for word, c in a.terms.items():
        value = Series.unit(sig, N)
        for letter, e in word.letters:
            key = (letter, e)
            factor = cache.get(key)
            if factor is None:
                factor = exp(Series.letter(sig, letter).scale(e), N)
                cache[key] = factor
            value = value * factor
        total = total + value.scale(c)
    return total


def _max_degree():
    return int(os.environ.get("GT_MAX_DEGREE", "24"))


def weight(w) -> int:
    """Weight-filtration valuation: lowest degree of theta_exp(w)."""
    a = _as_ring(w)
    if not a:
        raise ZeroElement("weight of the zero element is infinite")
    cap = _max_degree()
    N = 2
    while True:
        value = theta_exp_eval(a, N)
        if value:
            return value.low_degree()
        if N >= cap:
            raise ZeroElement(f"no nonzero term up to degree {cap}")
        N = min(2 * N, cap)


# ----------------------------------------------------------------------------


class Expansion:
    """The tangential expansion theta_F = F^{-1} o theta_exp."""

    def __init__(self, F: TAutElement):
        self.F = F
        self.sig = F.sig

    @classmethod
    def exponential(cls, sig, N):
        return cls(TAutElement.identity(sig, N))

    @property
    def N(self):
        return self.F.N

    def __call__(self, w, N=None) -> Series:
        return expansion_eval(self, w, N)

    def kvI_defect(self, N=None) -> Series:
        N = self.N if N is None else min(N, self.N)
        return (self.F.apply(omega(self.sig).with_valid(N)) - xi(self.sig, N)).truncate(N)

    @property
    def tangential(self) -> bool:
        return True


def expansion_eval(E: Expansion, w, N=None) -> Series:
    N = E.N if N is None else min(N, E.N)
    return E.F.inverse().apply(theta_exp_eval(w, N))


def is_special(E: Expansion, N=None) -> bool:
    """KVI through degree N: F(omega) = xi, i.e. log theta_F(gamma_0) = omega."""
    N = E.N if N is None else N
    if N > E.N:
        return False
    return not E.kvI_defect(N)


def _require_special(E: Expansion, N):
    if not is_special(E, N):
        raise NotSpecial(f"expansion is not special through degree {N}")


def loop_log(w: FreeGroupWord, E: Expansion | None = None, N: int = 6) -> CyclicSeries:
    """|log theta(w)| for the exponential expansion or ``E``."""
    value = theta_exp_eval(w, N) if E is None else expansion_eval(E, w, N)
    lg = log(value, N)
    return CyclicSeries(lg.sig, lg.terms, N)


def loop_trace(w, E: Expansion | None, N: int) -> CyclicSeries:
    value = theta_exp_eval(w, N) if E is None else expansion_eval(E, w, N)
    return CyclicSeries(value.sig, value.terms, N)


def loop_bracket(v, w, E: Expansion, N: int) -> CyclicSeries:
    """Graded coordinates of the Goldman bracket of |v| and |w| through degree N."""
    _require_special(E, N + 2)
    P = loop_trace(v, E, N + 2)
    Q = loop_trace(w, E, N + 2)
    return goldman_bracket_gr(P, Q).truncate(N)


def twisted_cobracket(F: TAutElement, framing, check_special: bool = True):
    """The cobracket in the coordinates of theta_F.

    P -> F^{-1} . gdiv_f(Ad_F(sigma_hat(P))); for a solution of the KV
    problem this equals the graded framed cobracket.
    """
    if framing.sig != F.sig:
        raise SignatureMismatch("framing belongs to another signature")
    if check_special and not is_special(Expansion(F)):
        raise NotSpecial("twisting automorphism does not satisfy KVI")
    Finv = F.inverse()

    def op(P: CyclicSeries) -> CyclicTensor:
        if P.sig != F.sig:
            raise SignatureMismatch("cyclic series from another signature")
        u = taut_adjoint(F, sigma_hat_gr(P.truncate(F.N)))
        value = gdiv_f(u, framing)
        return Finv.apply_tensor(value).truncate(min(F.N - 2, P.valid - 2))

    return op


def twisted_cobracket_genus0(F: TAutElement, framing):
    """Genus-0 shortcut: gr delta^f + sigma_hat(P) . (Dtilde j(F^{-1}) - C_q(F^{-1}) ^ 1)."""
    from .cyclic import delta_tilde
    from .loops import turaev_cobracket_gr
    from .tangential import C_q, j_cocycle

    sig = F.sig
    if sig.g != 0:
        from .errors import GenusNotZero

        raise GenusNotZero("the shortcut formula is a genus-0 statement")
    Finv = F.inverse()
    corr = delta_tilde(j_cocycle(Finv)) - wedge(C_q(Finv, framing), CyclicSeries.one(sig))

    def op(P: CyclicSeries) -> CyclicTensor:
        P = P.truncate(F.N)
        u = sigma_hat_gr(P)
        return (turaev_cobracket_gr(P, framing) + u.apply_tensor(corr)).truncate(min(F.N - 2, P.valid - 2))

    return op


def loop_cobracket(w, F: TAutElement, framing, N: int) -> CyclicTensor:
    """Graded coordinates of the framed cobracket of |w| through degree N."""
    if F.N < N + 2:
        raise NotSpecial(f"twist known only through degree {F.N}; need {N + 2}")
    _require_special(Expansion(F), N + 2)
    P = loop_trace(w, Expansion(F), N + 2)
    return twisted_cobracket(F, framing, check_special=False)(P).truncate(N)


def boundary_power_formula(sig: Signature, j: int, m: int, rot: int, N: int) -> CyclicTensor:
    """m rot (1 (x) |e^{m z_j}| - |e^{m z_j}| (x) 1) through degree N."""
    e = exp(Series.letter(sig, sig.z(j)).scale(m), N)
    P = CyclicSeries(sig, e.terms, N)
    one = CyclicSeries.one(sig)
    return wedge(one, P).scale(mpq(m * rot)).truncate(N)


__all__ = [
    "FreeGroupWord", "GroupRingElement", "Expansion", "theta_exp_eval", "weight",
    "expansion_eval", "is_special", "loop_log", "loop_trace", "loop_bracket",
    "twisted_cobracket", "twisted_cobracket_genus0", "loop_cobracket", "boundary_power_formula",
]

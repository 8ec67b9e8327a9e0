"""Tangential derivations and automorphisms, divergences and Jacobian cocycles.

A tangential derivation ``u = (u, u_1, ..., u_n)`` is stored by its images
on the weight-1 letters and its tangential components; the image of z_j is
always ``[z_j, u_j]``.  Its ``valid`` attribute is a *shift* validity: the
image of a letter ``a`` is exact through degree ``wt(a) + valid`` and
``u_j`` through degree ``valid``.

A tangential automorphism ``(F, f_1, ..., f_n)`` stores ``F`` on every
letter (z letters included) together with the ``f_j``; it is exact through
the truncation degree ``N``.  The group law is
``(F, f)(G, g) = (F o G, bch(f_j, F(g_j)))``.
"""
from __future__ import annotations

from math import factorial

from gmpy2 import mpq

from .algebra import (
    INF,
    ONE,
    ZERO,
    Series,
    Signature,
    bch,
    bracket,
    exp,
    hopf_coproduct,
    is_lie_like,
    log,
    q,
    tensor,
)
from .cyclic import CyclicSeries, CyclicTensor, co_counit_first, delta_tilde, necklace, tensor_cyclic, wedge
from .errors import GenusNotZero, LogFailure, NotInImage, NotPositiveDegree, SignatureMismatch

# ----------------------------------------------------------------------------
# derivations given by letter images


def apply_derivation(images: dict, a: Series, valid=INF) -> Series:
    """Apply the derivation with ``images[letter] -> Series`` to ``a`` (Leibniz)."""
    sig = a.sig
    weights = sig.weights
    out: dict = {}
    img_terms = {k: [(w, c, sum(weights[x] for x in w)) for w, c in v.terms.items()] for k, v in images.items()}
    for word, c in a.terms.items():
        dw = sum(weights[x] for x in word)
        for pos, letter in enumerate(word):
            terms = img_terms.get(letter)
            if not terms:
                continue
            pre, post = word[:pos], word[pos + 1:]
            base = dw - weights[letter]
            for iw, ic, idg in terms:
                if base + idg <= valid:
                    key = pre + iw + post
                    out[key] = out.get(key, ZERO) + c * ic
    return Series(sig, out, valid)


def solve_commutator(sig: Signature, letter: int, w: Series) -> Series:
    """Return ``a`` with ``[letter, a] = w`` and no pure powers of ``letter``.

    Raises NotInImage when ``w`` is not a commutator with ``letter``.
    """
    z = letter
    if not w:
        return Series.zero(sig, w.valid)
    a1: dict = {}
    for word, c in w.terms.items():
        if word[0] != z:
            if word[-1] != z:
                raise NotInImage("not in the image of ad(z)")
            a1[word[:-1]] = a1.get(word[:-1], ZERO) - c
    first = Series(sig, a1, w.valid)
    zs = Series.letter(sig, z)
    rest = w - bracket(zs, first)
    stripped: dict = {}
    for word, c in rest.terms.items():
        if word[0] != z:
            raise NotInImage("not in the image of ad(z)")
        stripped[word[1:]] = c
    inner = solve_commutator(sig, z, Series(sig, stripped, w.valid - sig.weights[z]))
    result = first + zs * inner
    result = result.with_valid(w.valid - sig.weights[z])
    if bracket(zs, result).with_valid(w.valid) != w:
        raise NotInImage("not in the image of ad(z)")
    return result


# ----------------------------------------------------------------------------


class TDerElement:
    """Element of tDer: derivation of A with u(z_j) = [z_j, u_j]."""

    __slots__ = ("sig", "images", "tangential", "valid", "_zimg")

    def __init__(self, sig: Signature, images=None, tangential=None, valid=INF):
        self.sig = sig
        self.valid = valid
        ng = 2 * sig.g
        imgs = [Series.zero(sig)] * ng
        if images:
            items = images.items() if isinstance(images, dict) else enumerate(images)
            for k, v in items:
                if v.sig != sig:
                    raise SignatureMismatch("image from another signature")
                imgs[k] = v
        tang = [Series.zero(sig)] * sig.n
        if tangential:
            items = tangential.items() if isinstance(tangential, dict) else enumerate(tangential)
            for k, v in items:
                if v.sig != sig:
                    raise SignatureMismatch("tangential component from another signature")
                tang[k] = v
        w = sig.weights
        valid = min([valid] + [imgs[a].valid - w[a] for a in range(ng)] + [t.valid for t in tang])
        self.valid = valid
        self.images = tuple(imgs[a].truncate(w[a] + valid) for a in range(ng))
        self.tangential = tuple(t.truncate(valid) for t in tang)
        self._zimg = None

    # -- construction helpers
    @classmethod
    def zero(cls, sig, valid=INF):
        return cls(sig, valid=valid)

    def _check(self, other):
        if not isinstance(other, TDerElement):
            raise TypeError("expected a TDerElement")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    # -- letter images
    def z_images(self):
        if self._zimg is None:
            sig = self.sig
            self._zimg = tuple(
                bracket(Series.letter(sig, sig.z(j + 1)), self.tangential[j]) for j in range(sig.n)
            )
        return self._zimg

    def letter_images(self) -> dict:
        out = {a: img for a, img in enumerate(self.images) if img}
        for j, zi in enumerate(self.z_images()):
            if zi:
                out[self.sig.z(j + 1)] = zi
        return out

    def image(self, letter: int) -> Series:
        if self.sig.is_z(letter):
            return self.z_images()[self.sig.z_index(letter) - 1]
        return self.images[letter]

    # -- shifts and validity
    def shift_low(self):
        """Lowest degree shift carried by a nonzero image (INF for zero)."""
        w = self.sig.weights
        lows = [img.low_degree() - w[a] for a, img in enumerate(self.images) if img]
        lows += [t.low_degree() for t in self.tangential if t]
        return min(lows, default=INF)

    def shift_low_effective(self):
        return min(self.shift_low(), self.valid + 1)

    def output_valid(self, valid_in, low_in):
        s = self.shift_low_effective()
        return min(valid_in + min(0, s), low_in + self.valid)

    def is_positive(self) -> bool:
        return self.shift_low() >= 1

    def is_lie(self) -> bool:
        return all(is_lie_like(img) for img in self.images) and all(is_lie_like(t) for t in self.tangential)

    def is_zero(self) -> bool:
        return not any(self.images) and not any(self.tangential)

    def component(self, s) -> "TDerElement":
        """Homogeneous part of shift ``s``."""
        w = self.sig.weights
        imgs = [img.component(w[a] + s) for a, img in enumerate(self.images)]
        tang = [t.component(s) for t in self.tangential]
        return TDerElement(self.sig, imgs, tang, self.valid)

    def truncate(self, S) -> "TDerElement":
        return TDerElement(self.sig, self.images, self.tangential, min(S, self.valid))

    # -- action
    def apply(self, a: Series) -> Series:
        if a.sig != self.sig:
            raise SignatureMismatch("derivation and series from different signatures")
        valid = self.output_valid(a.valid, a.low_effective())
        return apply_derivation(self.letter_images(), a, valid)

    def __call__(self, a: Series) -> Series:
        return self.apply(a)

    def apply_cyclic(self, P: CyclicSeries) -> CyclicSeries:
        rep = Series(P.sig, P.terms, P.valid)
        img = self.apply(rep)
        return CyclicSeries(P.sig, img.terms, img.valid)

    def apply_tensor(self, W: CyclicTensor) -> CyclicTensor:
        """Diagonal (Leibniz) action on |A|^{(x)k}."""
        sig = self.sig
        images = self.letter_images()
        valid = self.output_valid(W.valid, W.low_effective())
        out: dict = {}
        cache: dict = {}
        for key, c in W.terms.items():
            for i, word in enumerate(key):
                img = cache.get(word)
                if img is None:
                    img = apply_derivation(images, Series(sig, {word: ONE}), INF)
                    img = CyclicSeries(sig, img.terms)
                    cache[word] = img
                for w2, c2 in img.terms.items():
                    k2 = key[:i] + (w2,) + key[i + 1:]
                    out[k2] = out.get(k2, ZERO) + c * c2
        return CyclicTensor(sig, out, valid, arity=W.arity, canonical=True)

    def act(self, target):
        if isinstance(target, CyclicTensor):
            return self.apply_tensor(target)
        if isinstance(target, CyclicSeries):
            return self.apply_cyclic(target)
        if isinstance(target, Series):
            return self.apply(target)
        raise TypeError(f"tDer does not act on {type(target).__name__}")

    # -- linear structure
    def __add__(self, other):
        self._check(other)
        return TDerElement(
            self.sig,
            [a + b for a, b in zip(self.images, other.images)],
            [a + b for a, b in zip(self.tangential, other.tangential)],
            min(self.valid, other.valid),
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TDerElement(self.sig, [-a for a in self.images], [-t for t in self.tangential], self.valid)

    def scale(self, c):
        return TDerElement(
            self.sig, [a.scale(c) for a in self.images], [t.scale(c) for t in self.tangential], self.valid
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, TDerElement) or other.sig != self.sig:
            return NotImplemented
        S = min(self.valid, other.valid)
        w = self.sig.weights
        for a, (i1, i2) in enumerate(zip(self.images, other.images)):
            if (i1 - i2).truncate(w[a] + S):
                return False
        return all(not (t1 - t2).truncate(S) for t1, t2 in zip(self.tangential, other.tangential))

    __hash__ = None

    def __repr__(self):
        sig = self.sig
        parts = [f"{sig.letter_name(a)} -> {img.pretty()}" for a, img in enumerate(self.images) if img]
        parts += [f"u{j + 1} = {t.pretty()}" for j, t in enumerate(self.tangential) if t]
        return "TDer(" + "; ".join(parts or ["0"]) + ")"

    def to_json(self) -> dict:
        sig = self.sig
        return {
            "signature": sig.to_json(),
            "valid_shift": None if self.valid == INF else int(self.valid),
            "images": {sig.letter_name(a): img.to_json()["terms"] for a, img in enumerate(self.images)},
            "tangential": [t.to_json()["terms"] for t in self.tangential],
        }

    @classmethod
    def from_json(cls, data, sig=None):
        sig = sig or Signature.from_json(data["signature"])
        valid = data.get("valid_shift")
        valid = INF if valid is None else int(valid)
        images = {}
        for name, terms in data.get("images", {}).items():
            images[sig.parse_letter(name)] = Series.from_json({"terms": terms}, sig)
        tang = [Series.from_json({"terms": terms}, sig) for terms in data.get("tangential", [])]
        return cls(sig, images, tang, valid)


def tder_bracket(u: TDerElement, v: TDerElement) -> TDerElement:
    """[u, v] with [u, v]_j = u(v_j) - v(u_j) + [u_j, v_j]."""
    u._check(v)
    sig = u.sig
    imgs = [u.apply(v.images[a]) - v.apply(u.images[a]) for a in range(2 * sig.g)]
    tang = [
        u.apply(v.tangential[j]) - v.apply(u.tangential[j]) + bracket(u.tangential[j], v.tangential[j])
        for j in range(sig.n)
    ]
    s_u, s_v = u.shift_low_effective(), v.shift_low_effective()
    valid = min(u.valid + min(s_v, 0) if s_v != INF else INF, v.valid + min(s_u, 0) if s_u != INF else INF)
    valid = min(valid, u.valid + (s_v if s_v != INF else INF), v.valid + (s_u if s_u != INF else INF))
    return TDerElement(sig, imgs, tang, valid)


def tder_apply(u: TDerElement, a):
    return u.act(a)


def tangential_defect(u: TDerElement, letter_images: dict) -> list:
    """For a derivation given on all letters, u(z_j) - [z_j, u_j] per j."""
    sig = u.sig
    return [letter_images[sig.z(j + 1)] - u.z_images()[j] for j in range(sig.n)]


# ----------------------------------------------------------------------------


class TAutElement:
    """Element (F, f_1, ..., f_n) of TAut, exact through degree ``N``."""

    __slots__ = ("sig", "images", "tangential", "N", "_cache", "_inverse")

    def __init__(self, sig: Signature, images, tangential, N):
        self.sig = sig
        self.N = N
        self.images = tuple(img.with_valid(N) for img in images)
        self.tangential = tuple(t.with_valid(N - 2) for t in tangential)
        if len(self.images) != sig.rank or len(self.tangential) != sig.n:
            raise ValueError("wrong number of images or tangential components")
        self._cache = {(): Series.unit(sig, N)}
        self._inverse = None

    @classmethod
    def identity(cls, sig, N):
        return cls(
            sig,
            [Series.letter(sig, a, N) for a in range(sig.rank)],
            [Series.zero(sig, N - 2) for _ in range(sig.n)],
            N,
        )

    def _check(self, other):
        if not isinstance(other, TAutElement):
            raise TypeError("expected a TAutElement")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def _word_image(self, word):
        hit = self._cache.get(word)
        if hit is None:
            hit = self._word_image(word[:-1]) * self.images[word[-1]]
            hit = hit.truncate(self.N)
            self._cache[word] = hit
        return hit

    def apply(self, a: Series) -> Series:
        if a.sig != self.sig:
            raise SignatureMismatch("automorphism and series from different signatures")
        N = min(self.N, a.valid)
        out: dict = {}
        for word, c in a.terms.items():
            for w2, c2 in self._word_image(word).terms.items():
                out[w2] = out.get(w2, ZERO) + c * c2
        return Series(self.sig, out, N)

    def __call__(self, a):
        return self.act(a)

    def apply_cyclic(self, P: CyclicSeries) -> CyclicSeries:
        img = self.apply(Series(P.sig, P.terms, P.valid))
        return CyclicSeries(P.sig, img.terms, img.valid)

    def apply_tensor(self, W: CyclicTensor) -> CyclicTensor:
        sig = self.sig
        cache: dict = {}

        def img(word):
            r = cache.get(word)
            if r is None:
                r = CyclicSeries(sig, self._word_image(word).terms)
                cache[word] = r
            return r

        out: dict = {}
        for key, c in W.terms.items():
            acc = {(): c}
            for word in key:
                nxt: dict = {}
                for k1, c1 in acc.items():
                    for w2, c2 in img(word).terms.items():
                        k = k1 + (w2,)
                        nxt[k] = nxt.get(k, ZERO) + c1 * c2
                acc = nxt
            for k, v in acc.items():
                out[k] = out.get(k, ZERO) + v
        return CyclicTensor(sig, out, min(W.valid, self.N), arity=W.arity, canonical=True)

    def act(self, target):
        if isinstance(target, CyclicTensor):
            return self.apply_tensor(target)
        if isinstance(target, CyclicSeries):
            return self.apply_cyclic(target)
        if isinstance(target, Series):
            return self.apply(target)
        raise TypeError(f"TAut does not act on {type(target).__name__}")

    def image(self, letter):
        return self.images[letter]

    def tangential_defect(self) -> list:
        """F(z_j) - exp(-f_j) z_j exp(f_j) for each j (zero for a valid element)."""
        sig, N = self.sig, self.N
        out = []
        for j in range(sig.n):
            f = self.tangential[j]
            z = Series.letter(sig, sig.z(j + 1), N)
            out.append(self.images[sig.z(j + 1)] - exp(-f, N) * z * exp(f, N))
        return out

    def is_identity(self) -> bool:
        return self == TAutElement.identity(self.sig, self.N)

    def __eq__(self, other):
        if not isinstance(other, TAutElement) or other.sig != self.sig:
            return NotImplemented
        return all(a == b for a, b in zip(self.images, other.images)) and all(
            a == b for a, b in zip(self.tangential, other.tangential)
        )

    __hash__ = None

    def truncate(self, N):
        return TAutElement(self.sig, self.images, self.tangential, min(N, self.N))

    def __repr__(self):
        sig = self.sig
        parts = [f"{sig.letter_name(a)} -> {img.pretty()}" for a, img in enumerate(self.images)]
        parts += [f"f{j + 1} = {t.pretty()}" for j, t in enumerate(self.tangential)]
        return f"TAut[N={self.N}](" + "; ".join(parts) + ")"

    # -- group structure
    def compose(self, other: "TAutElement") -> "TAutElement":
        """self o other."""
        self._check(other)
        N = min(self.N, other.N)
        imgs = [self.apply(img).truncate(N) for img in other.images]
        tang = [
            bch(f, self.apply(g).truncate(N - 2), N - 2) for f, g in zip(self.tangential, other.tangential)
        ]
        return TAutElement(self.sig, imgs, tang, N)

    __matmul__ = compose

    def inverse_apply(self, a: Series) -> Series:
        """F^{-1}(a) via the Neumann series sum_k (1 - F)^k a."""
        N = min(self.N, a.valid)
        total = a.truncate(N)
        term = total
        while term:
            term = (term - self.apply(term)).truncate(N)
            total = total + term
        return total

    def inverse(self) -> "TAutElement":
        if self._inverse is None:
            sig, N = self.sig, self.N
            imgs = [self.inverse_apply(Series.letter(sig, a, N)) for a in range(sig.rank)]
            tang = [-self.inverse_apply(f).truncate(N - 2) for f in self.tangential]
            inv = TAutElement(sig, imgs, tang, N)
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def to_json(self) -> dict:
        sig = self.sig
        return {
            "signature": sig.to_json(),
            "degree": int(self.N),
            "images": {sig.letter_name(a): img.to_json()["terms"] for a, img in enumerate(self.images)},
            "tangential": [t.to_json()["terms"] for t in self.tangential],
        }

    @classmethod
    def from_json(cls, data, sig=None):
        sig = sig or Signature.from_json(data["signature"])
        N = int(data["degree"])
        imgs = [None] * sig.rank
        for name, terms in data["images"].items():
            imgs[sig.parse_letter(name)] = Series.from_json({"terms": terms, "valid_degree": N}, sig)
        tang = [Series.from_json({"terms": t, "valid_degree": N - 2}, sig) for t in data["tangential"]]
        return cls(sig, imgs, tang, N)


def taut_compose(F: TAutElement, G: TAutElement) -> TAutElement:
    return F.compose(G)


def taut_inverse(F: TAutElement) -> TAutElement:
    return F.inverse()


def _operator_exp(op, a: Series, N) -> Series:
    """sum_k op^k(a)/k! for a degree-raising linear ``op``."""
    total = a.truncate(N)
    term = total
    k = 0
    while term:
        k += 1
        term = op(term).truncate(N).scale(mpq(1, k))
        total = total + term
    return total


def taut_exp(u: TDerElement, N) -> TAutElement:
    """exp: tder+ -> TAut, exact through degree ``N``.

    The automorphism part is the operator exponential of ``u``; the
    tangential parts come from g_j = exp(L_{u_j} + u)(1), f_j = log g_j,
    which solves the flow g' = u_j g + u(g) of the one-parameter subgroup.
    """
    sig = u.sig
    if not u.is_zero() and u.shift_low() < 1:
        raise NotPositiveDegree("exp needs a derivation of positive degree")
    # images of weight-1 letters are only known through degree valid + 1
    N = min(N, u.valid + (1 if sig.g else 2))
    imgs = [_operator_exp(u.apply, Series.letter(sig, a, N), N) for a in range(sig.rank)]
    tang = []
    for j in range(sig.n):
        uj = u.tangential[j]

        def op(b, uj=uj):
            return (uj * b).truncate(N - 2) + u.apply(b).truncate(N - 2)

        g = _operator_exp(op, Series.unit(sig, N - 2), N - 2)
        tang.append(log(g, N - 2))
    return TAutElement(sig, imgs, tang, N)


def _operator_log_images(F: TAutElement) -> dict:
    """log F as a derivation, on every letter: sum (-1)^{m+1}/m (F-1)^m(a)."""
    sig, N = F.sig, F.N
    out = {}
    for a in range(sig.rank):
        x = Series.letter(sig, a, N)
        term = x
        total = Series.zero(sig, N)
        m = 0
        while True:
            m += 1
            term = (F.apply(term) - term).truncate(N)
            if not term:
                break
            total = total + term.scale(mpq(1 if m % 2 else -1, m))
        out[a] = total
    return out


def taut_log(F: TAutElement) -> TDerElement:
    """The unique u in tder+ with exp(u) = F (through degree N)."""
    sig, N = F.sig, F.N
    images = _operator_log_images(F)
    try:
        tang = [solve_commutator(sig, sig.z(j + 1), images[sig.z(j + 1)]) for j in range(sig.n)]
    except NotInImage as exc:
        raise LogFailure("log F is not tangential") from exc
    S = N - 2 if sig.n else N - 1
    u = TDerElement(sig, {a: images[a] for a in range(2 * sig.g)}, [t.truncate(N - 2) for t in tang], S)
    if sig.n:
        trial = taut_exp(u, N)
        fixed = []
        for j in range(sig.n):
            # exp(u + lambda z_j) = exp(u) (id, lambda z_j) since (0, z_j) is central
            z = sig.z(j + 1)
            corr = bch(F.tangential[j], -trial.tangential[j], N - 2)
            lam = corr.coeff((z,))
            if corr != Series(sig, {(z,): lam}, N - 2):
                raise LogFailure("tangential components are not related by a central element")
            fixed.append(u.tangential[j] + Series(sig, {(z,): lam}))
        u = TDerElement(sig, u.images, fixed, S)
    return u


def taut_adjoint(F: TAutElement, u: TDerElement) -> TDerElement:
    """Ad_F(u): the t-linear part of F o exp(t u) o F^{-1}.

    Derivation part F u F^{-1}; tangential part
    e^{f_j} F(u_j) e^{-f_j} + e^{f_j} (F u F^{-1})(e^{-f_j}).
    """
    sig, N = F.sig, F.N
    if u.sig != sig:
        raise SignatureMismatch("adjoint across signatures")
    Finv = F.inverse()
    conj = {}
    for a in range(sig.rank):
        conj[a] = F.apply(u.apply(Finv.apply(Series.letter(sig, a, N)))).truncate(N)
    tang = []
    for j in range(sig.n):
        f = F.tangential[j]
        g = exp(f, N - 2)
        ginv = exp(-f, N - 2)
        part1 = (g * F.apply(u.tangential[j]) * ginv).truncate(N - 2)
        part2 = (g * apply_derivation(conj, ginv, N - 2)).truncate(N - 2)
        tang.append(part1 + part2)
    s_low = u.shift_low_effective()
    S = min(u.valid, (N - 2 if sig.n else N - 1) + min(0, s_low))
    return TDerElement(sig, {a: conj[a] for a in range(2 * sig.g)}, tang, S)


# ----------------------------------------------------------------------------
# divergence cocycles


def _partial(word: tuple, letter: int):
    """Double derivation d/d letter: sum over occurrences of prefix (x) suffix."""
    return [(word[:p], word[p + 1:]) for p, a in enumerate(word) if a == letter]


def div(u: TDerElement) -> CyclicSeries:
    """Divergence sum_i |z_i (u_i)^i| in genus 0 (a^i: right z_i-component of a)."""
    sig = u.sig
    if sig.g != 0:
        raise GenusNotZero("div is defined for genus 0 only")
    out: dict = {}
    for j, t in enumerate(u.tangential):
        z = sig.z(j + 1)
        for word, c in t.terms.items():
            if word and word[-1] == z:
                k = necklace(word)
                out[k] = out.get(k, ZERO) + c
    return CyclicSeries(sig, out, u.valid, canonical=True)


def tdiv(u: TDerElement) -> CyclicTensor:
    """Double divergence |sum_i d_{x_i}u(x_i) + d_{y_i}u(y_i)
    + sum_j (z_j (x) 1) d_{z_j}u_j - d_{z_j}u_j (1 (x) z_j)|."""
    sig = u.sig
    out: dict = {}

    def add(w1, w2, c):
        key = (necklace(w1), necklace(w2))
        out[key] = out.get(key, ZERO) + c

    for a, img in enumerate(u.images):
        for word, c in img.terms.items():
            for pre, post in _partial(word, a):
                add(pre, post, c)
    for j, t in enumerate(u.tangential):
        z = sig.z(j + 1)
        for word, c in t.terms.items():
            for pre, post in _partial(word, z):
                add((z,) + pre, post, c)
                add(pre, post + (z,), -c)
    return CyclicTensor(sig, out, u.valid, arity=2, canonical=True)


def c_q(u: TDerElement, framing) -> CyclicSeries:
    """sum_j q(z_j) |u_j|."""
    sig = u.sig
    total = CyclicSeries.zero(sig, u.valid)
    for j, t in enumerate(u.tangential):
        qj = framing.q(j + 1)
        if qj:
            total = total + CyclicSeries(sig, t.terms, u.valid).scale(qj)
    return total


def r_coefficients(N: int) -> list:
    """Coefficients of r(s) = log((e^s - 1)/s) through s^N."""
    # b(s) = (e^s - 1)/s - 1
    b = [mpq(0)] + [mpq(1, factorial(k + 1)) for k in range(1, N + 1)]
    result = [mpq(0)] * (N + 1)
    power = [mpq(1)] + [mpq(0)] * N
    for m in range(1, N + 1):
        nxt = [mpq(0)] * (N + 1)
        for i, pi in enumerate(power):
            if pi:
                for k in range(1, N + 1 - i):
                    if b[k]:
                        nxt[i + k] += pi * b[k]
        power = nxt
        sign = mpq(1 if m % 2 else -1, m)
        for i in range(N + 1):
            result[i] += sign * power[i]
    return result


def r_element(sig: Signature, N: int) -> CyclicSeries:
    """The element sum_i |r(x_i) + r(y_i)| through degree N."""
    coeffs = r_coefficients(N)
    terms: dict = {}
    for a in range(2 * sig.g):
        for k in range(1, N + 1):
            if coeffs[k]:
                terms[(a,) * k] = coeffs[k]
    return CyclicSeries(sig, terms, N)


def p_element(framing, N=INF) -> CyclicSeries:
    p = framing.p()
    return CyclicSeries(p.sig, p.terms, N)


def gdiv_f(u: TDerElement, framing, N=None) -> CyclicTensor:
    """tdiv(u) + u.(Dtilde r + |p| ^ 1) - c_q(u) ^ 1."""
    sig = u.sig
    if N is None:
        N = u.valid
    one = CyclicSeries.one(sig)
    base = tdiv(u) - wedge(c_q(u, framing), one)
    if sig.g == 0:
        return base.truncate(N)
    M = N + 2
    target = delta_tilde(r_element(sig, M)) + wedge(p_element(framing, M), one)
    return (base + u.apply_tensor(target)).truncate(N)


# ----------------------------------------------------------------------------
# integration of cocycles


def integrate_cocycle(c, u: TDerElement, N=None):
    """C(exp u) = sum_m u^m(c(u))/(m+1)! for a Lie 1-cocycle ``c``."""
    if not u.is_zero() and u.shift_low() < 1:
        raise NotPositiveDegree("integration needs u in tder+")
    value = c(u)
    if N is not None:
        value = value.truncate(N)
    total = value
    term = value
    m = 0
    while term:
        m += 1
        term = u.act(term).scale(mpq(1, m + 1))
        if N is not None:
            term = term.truncate(N)
        total = total + term
    return total


def J_cocycle(F: TAutElement) -> CyclicTensor:
    u = taut_log(F)
    return integrate_cocycle(tdiv, u, F.N - 2).truncate(F.N - 2)


def j_cocycle(F: TAutElement) -> CyclicSeries:
    """j(F) = (id (x) eps) J(F); satisfies Dtilde j = J."""
    return co_counit_first(J_cocycle(F))


def C_q(F: TAutElement, framing) -> CyclicSeries:
    u = taut_log(F)
    return integrate_cocycle(lambda v: c_q(v, framing), u, F.N - 2).truncate(F.N - 2)


def j_q(F: TAutElement, framing) -> CyclicSeries:
    return j_cocycle(F) - C_q(F, framing)


def div_cocycle_group(F: TAutElement) -> CyclicSeries:
    """Integration of div itself (genus 0); equals j(F) by the commutative diagram."""
    u = taut_log(F)
    return integrate_cocycle(div, u, F.N - 2).truncate(F.N - 2)


def pullback_cocycle(F: TAutElement, c):
    """(F^* c)(u) = F^{-1} . c(Ad_F u).

    With this convention F^* tdiv = tdiv + d J(F^{-1}).
    """
    Finv = F.inverse()

    def pulled(u: TDerElement):
        return Finv.act(c(taut_adjoint(F, u)))

    return pulled


def coboundary(w):
    """Lie algebra coboundary: (d w)(u) = u . w."""

    def dw(u: TDerElement):
        return u.act(w)

    return dw


__all__ = [
    "TDerElement", "TAutElement", "tder_bracket", "tder_apply", "taut_compose", "taut_inverse",
    "taut_exp", "taut_log", "taut_adjoint", "div", "tdiv", "c_q", "gdiv_f", "r_coefficients",
    "r_element", "integrate_cocycle", "J_cocycle", "j_cocycle", "C_q", "j_q", "pullback_cocycle",
    "coboundary", "apply_derivation", "solve_commutator",
]

"""Free Lie algebra on the weighted alphabet: Lyndon basis by weighted degree."""
from __future__ import annotations

from functools import lru_cache

from .algebra import ONE, Series, Signature, bracket


def is_lyndon(word: tuple) -> bool:
    n = len(word)
    if n == 0:
        return False
    return all(word < word[i:] + word[:i] for i in range(1, n))


def standard_factorization(word: tuple):
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError("standard factorization needs a Lyndon word of length >= 2")


@lru_cache(maxsize=None)
def _bracketed(sig: Signature, word: tuple) -> Series:
    if len(word) == 1:
        return Series(sig, {word: ONE})
    u, v = standard_factorization(word)
    return bracket(_bracketed(sig, u), _bracketed(sig, v))


@lru_cache(maxsize=None)
def lyndon_words(sig: Signature, d: int) -> tuple:
    return tuple(w for w in sig.words_of_degree(d) if is_lyndon(w))


def lie_basis(sig: Signature, d: int) -> list:
    """Basis of the degree-``d`` part of the free Lie algebra (standard bracketing)."""
    return [_bracketed(sig, w) for w in lyndon_words(sig, d)]


def lie_dimension(sig: Signature, d: int) -> int:
    return len(lyndon_words(sig, d))

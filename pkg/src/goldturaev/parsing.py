"""Tiny parser for linear combinations of words and cyclic words.

Grammar (whitespace separated letters)::

    expr  := term (('+'|'-') term)*
    term  := [rational ['*']] (word | '|' word '|' | '1')

``x1 y1 - 1/2 |z1 z2| + 3``.  A bare rational is a multiple of the empty word.
"""
from __future__ import annotations

import re

from gmpy2 import mpq

_TOKEN = re.compile(r"\s*(\||[+-]|\*|\d+(?:/\d+)?|[xyz]\d+)")


def _tokens(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_linear(sig, text, cyclic=False) -> dict:
    """Return ``{word: coeff}``; with ``cyclic=True`` terms must be ``|...|``."""
    toks = _tokens(text)
    terms: dict = {}
    i = 0
    sign = 1
    expect_term = True
    while i < len(toks):
        t = toks[i]
        if t in "+-" and len(t) == 1:
            sign = sign * (-1 if t == "-" else 1) if expect_term else (-1 if t == "-" else 1)
            expect_term = True
            i += 1
            continue
        coeff = mpq(1)
        if re.fullmatch(r"\d+(/\d+)?", t):
            coeff = mpq(t)
            i += 1
            if i < len(toks) and toks[i] == "*":
                i += 1
            if i >= len(toks) or toks[i] in ("+", "-"):
                # bare rational: multiple of the empty (cyclic) word
                terms[()] = terms.get((), 0) + sign * coeff
                sign = 1
                expect_term = False
                continue
        if toks[i] == "|":
            i += 1
            letters = []
            while i < len(toks) and toks[i] != "|":
                letters.append(toks[i])
                i += 1
            if i >= len(toks):
                raise ValueError("unterminated |...|")
            i += 1
            word = sig.parse_word(letters)
        else:
            if cyclic:
                raise ValueError("cyclic words must be written |...|")
            letters = []
            while i < len(toks) and re.fullmatch(r"[xyz]\d+", toks[i]):
                letters.append(toks[i])
                i += 1
            if not letters:
                raise ValueError(f"unexpected token {toks[i]!r}")
            word = sig.parse_word(letters)
        terms[word] = terms.get(word, 0) + sign * coeff
        sign = 1
        expect_term = False
    return {k: v for k, v in terms.items() if v}

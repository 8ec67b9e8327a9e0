"""Exact sparse Gaussian elimination over Q.

Vectors are dicts ``key -> mpq``; keys only need to be mutually comparable.
A :class:`Echelon` absorbs column vectors one at a time, keeping every
pivot row fully expressed in terms of the original columns, so that rank,
kernel, image membership and particular solutions fall out together.
"""
from __future__ import annotations

from gmpy2 import mpq

from .errors import NotInImage

ZERO = mpq(0)


def _axpy(target: dict, c, vec: dict):
    """target += c * vec, dropping zeros."""
    for k, v in vec.items():
        nv = target.get(k, ZERO) + c * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incremental column echelon form.

    ``pivots[key] = (vec, comb)``: ``vec`` has leading key ``key`` (maximal
    under the key order) with coefficient 1, and ``vec = sum comb[i] col_i``.
    """

    def __init__(self):
        self.pivots: dict = {}
        self.kernel: list = []
        self.ncols = 0

    def reduce(self, vec: dict, comb: dict | None = None):
        """Reduce ``vec`` against the pivots; returns ``(residual, comb)``."""
        vec = dict(vec)
        comb = dict(comb) if comb else {}
        residual: dict = {}
        while vec:
            k = max(vec)
            c = vec[k]
            piv = self.pivots.get(k)
            if piv is None:
                residual[k] = c
                del vec[k]
                continue
            pvec, pcomb = piv
            _axpy(vec, -c, pvec)
            _axpy(comb, -c, pcomb)
        return residual, comb

    def add(self, vec: dict) -> bool:
        """Add a new column; returns True if it increased the rank."""
        idx = self.ncols
        self.ncols += 1
        residual, comb = self.reduce(vec, {idx: mpq(1)})
        if not residual:
            self.kernel.append(comb)
            return False
        lead = max(residual)
        inv = 1 / residual[lead]
        residual = {k: v * inv for k, v in residual.items()}
        comb = {k: v * inv for k, v in comb.items()}
        self.pivots[lead] = (residual, comb)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, rhs: dict):
        """Return coefficients ``x`` (dict col -> mpq) with sum x_i col_i = rhs, or None."""
        residual, comb = self.reduce(rhs)
        if residual:
            return None
        # rhs - sum(...) reduced to zero: comb records -(combination used)
        return {i: -c for i, c in comb.items() if c}

    def residual(self, rhs: dict) -> dict:
        return self.reduce(rhs)[0]


def solve_linear(columns, rhs=None):
    """Solve ``sum_i x_i columns[i] = rhs`` exactly.

    Returns ``(solution, kernel)`` where ``solution`` is a dict
    ``index -> coefficient`` (None if inconsistent; ``{}`` when ``rhs`` is
    None) and ``kernel`` is a list of such dicts spanning the null space.
    """
    ech = Echelon()
    for col in columns:
        ech.add(col)
    sol = {} if rhs is None else ech.solve(rhs)
    return sol, ech.kernel


def solve_or_raise(columns, rhs):
    sol, kernel = solve_linear(columns, rhs)
    if sol is None:
        raise NotInImage("right-hand side is not in the image")
    return sol, kernel


def rank(columns) -> int:
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return ech.rank


def combine(columns, coeffs: dict) -> dict:
    out: dict = {}
    for i, c in coeffs.items():
        _axpy(out, c, columns[i])
    return out


def min_norm_solution(columns, rhs):
    """Least Euclidean-norm exact solution of ``sum x_i col_i = rhs`` (None if none).

    Uses x = A^T y with (A A^T) y = rhs restricted to the row space.
    """
    sol, _ = solve_linear(columns, rhs)
    if sol is None:
        return None
    keys = sorted({k for col in columns for k in col} | set(rhs))
    # Gram matrix columns G[:, k] = A A^T e_k
    gram_cols = []
    for k in keys:
        col: dict = {}
        for i, c in enumerate(columns):
            a_ik = c.get(k)
            if a_ik:
                _axpy(col, a_ik, c)
        gram_cols.append(col)
    y, _ = solve_linear(gram_cols, rhs)
    if y is None:
        raise AssertionError("Gram system inconsistent although A x = b is solvable")
    x: dict = {}
    for idx, yk in y.items():
        k = keys[idx]
        for i, c in enumerate(columns):
            a_ik = c.get(k)
            if a_ik:
                x[i] = x.get(i, ZERO) + a_ik * yk
    return {i: v for i, v in x.items() if v}

"""Framing data: rotation numbers and the linear data c_f, q, p, chi derived from them."""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import Series, Signature


@dataclass(frozen=True)
class FramingData:
    """Rotation numbers of a framing f on Sigma_{g,n+1}.

    ``rot_boundary[j-1]`` is rot_f of the j-th boundary (j >= 1);
    ``rot_alpha``/``rot_beta`` are rot_f of the loops alpha_i, beta_i, which
    are also the values of chi on the symplectic basis because the adapted
    framing has rotation number 0 on them.
    """

    sig: Signature
    rot_boundary: tuple = field(default=())
    rot_alpha: tuple = field(default=())
    rot_beta: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "rot_boundary", tuple(int(r) for r in self.rot_boundary))
        object.__setattr__(self, "rot_alpha", tuple(int(r) for r in self.rot_alpha))
        object.__setattr__(self, "rot_beta", tuple(int(r) for r in self.rot_beta))
        if len(self.rot_boundary) != self.sig.n:
            raise ValueError(f"rot_boundary needs {self.sig.n} entries")
        if len(self.rot_alpha) != self.sig.g or len(self.rot_beta) != self.sig.g:
            raise ValueError(f"rot_alpha/rot_beta need {self.sig.g} entries")

    @classmethod
    def adapted(cls, sig: Signature) -> "FramingData":
        return cls(sig, (-1,) * sig.n, (0,) * sig.g, (0,) * sig.g)

    def c_f(self, letter: int) -> int:
        """c_f on a basis letter: 0 on x, y; rot_f(boundary j) + 1 on z_j."""
        if not self.sig.is_z(letter):
            return 0
        return self.rot_boundary[self.sig.z_index(letter) - 1] + 1

    def q(self, j: int) -> int:
        """q(z_j) = c_f(z_j), j 1-based."""
        return self.rot_boundary[j - 1] + 1

    @property
    def q_values(self) -> tuple:
        return tuple(r + 1 for r in self.rot_boundary)

    def chi(self, letter: int) -> int:
        sig = self.sig
        if sig.is_z(letter):
            return self.q(sig.z_index(letter))
        i = letter // 2
        return self.rot_alpha[i] if letter % 2 == 0 else self.rot_beta[i]

    def p(self) -> Series:
        """The element p of span{x, y} with <p, .> = chi - c_f.

        With <x_i, y_i> = 1: p = sum_i chi(y_i) x_i - chi(x_i) y_i.
        """
        sig = self.sig
        terms = {}
        for i in range(1, sig.g + 1):
            terms[(sig.x(i),)] = mpq(self.rot_beta[i - 1])
            terms[(sig.y(i),)] = mpq(-self.rot_alpha[i - 1])
        return Series(sig, terms)

    def rot_outer_boundary(self) -> int:
        """rot_f of the 0-th boundary, forced by Poincare-Hopf."""
        return 1 - 2 * self.sig.g - sum(self.q_values)

    def is_adapted(self) -> bool:
        return all(r == -1 for r in self.rot_boundary) and not any(self.rot_alpha) and not any(self.rot_beta)

    def to_json(self) -> dict:
        return {
            "rot_boundary": list(self.rot_boundary),
            "rot_alpha": list(self.rot_alpha),
            "rot_beta": list(self.rot_beta),
        }

    @classmethod
    def from_json(cls, sig: Signature, data) -> "FramingData":
        return cls(
            sig,
            tuple(data.get("rot_boundary", (-1,) * sig.n)),
            tuple(data.get("rot_alpha", (0,) * sig.g)),
            tuple(data.get("rot_beta", (0,) * sig.g)),
        )

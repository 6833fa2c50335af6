"""
Bicomplex numbers z1 + j z2 with j^2 = -1 and i j a new unit.

Values are stored in Cartesian form ``(sc, vec)``.  The idempotent view
``w = p+ w+ + p- w-`` is computed on demand; in that view multiplication is
componentwise, which is what makes the algebra easy to work with.

Both fields may be numpy arrays, in which case every operation acts
elementwise.  That is how bicomplex-valued functions on a grid are handled.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

ComplexLike = Union[complex, float, int, np.ndarray]

SQRT2 = np.sqrt(2.0)


class IdempotentPair(NamedTuple):
    """Components ``(w+, w-)`` of ``w = p+ w+ + p- w-``."""

    plus: ComplexLike
    minus: ComplexLike


@dataclass(frozen=True, eq=False)
class Bicomplex:
    """
    A bicomplex number ``sc + j*vec``.

    Attributes:
        sc: scalar part z1 (complex, or complex array)
        vec: vector part z2 (complex, or complex array)

    Examples:
        >>> J * J
        Bicomplex(sc=(-1+0j), vec=0j)
        >>> Bicomplex(1, 1j).idempotent
        IdempotentPair(plus=(2+0j), minus=0j)
    """

    sc: ComplexLike = 0.0
    vec: ComplexLike = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sc", _as_complex(self.sc))
        object.__setattr__(self, "vec", _as_complex(self.vec))

    # -- views ---------------------------------------------------------
    @property
    def plus(self):
        return self.sc - 1j * self.vec

    @property
    def minus(self):
        return self.sc + 1j * self.vec

    @property
    def idempotent(self) -> IdempotentPair:
        return IdempotentPair(self.plus, self.minus)

    @classmethod
    def from_pair(cls, plus: ComplexLike, minus: ComplexLike) -> "Bicomplex":
        plus = _as_complex(plus)
        minus = _as_complex(minus)
        return cls((plus + minus) / 2, (minus - plus) / 2j)

    @property
    def shape(self):
        return np.shape(np.broadcast_arrays(self.sc, self.vec)[0])

    # -- algebra -------------------------------------------------------
    def __add__(self, other):
        other = as_bicomplex(other)
        return Bicomplex(self.sc + other.sc, self.vec + other.vec)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_bicomplex(other)
        return Bicomplex(self.sc - other.sc, self.vec - other.vec)

    def __rsub__(self, other):
        return as_bicomplex(other) - self

    def __neg__(self):
        return Bicomplex(-self.sc, -self.vec)

    def __mul__(self, other):
        if isinstance(other, Bicomplex):
            return mul(self, other)
        # complex scalars (or arrays of them) act on both parts
        return Bicomplex(self.sc * other, self.vec * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Bicomplex):
            raise TypeError("division by a bicomplex number is not supported")
        return Bicomplex(self.sc / other, self.vec / other)

    def conj(self) -> "Bicomplex":
        return bconj(self)

    def norm(self):
        return bnorm(self)

    def __getitem__(self, idx):
        sc, vec = np.broadcast_arrays(self.sc, self.vec)
        return Bicomplex(sc[idx], vec[idx])

    def __repr__(self):
        return f"Bicomplex(sc={self.sc!r}, vec={self.vec!r})"


def _as_complex(x):
    if isinstance(x, np.ndarray):
        return x.astype(complex, copy=False)
    return complex(x)


def as_bicomplex(x) -> Bicomplex:
    if isinstance(x, Bicomplex):
        return x
    return Bicomplex(x, 0.0)


ONE = Bicomplex(1.0, 0.0)
ZERO = Bicomplex(0.0, 0.0)
J = Bicomplex(0.0, 1.0)
P_PLUS = Bicomplex(0.5, 0.5j)
P_MINUS = Bicomplex(0.5, -0.5j)


def mul(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    """(z1 + j z2)(w1 + j w2) = (z1 w1 - z2 w2) + j (z1 w2 + z2 w1)."""
    return Bicomplex(a.sc * b.sc - a.vec * b.vec, a.sc * b.vec + a.vec * b.sc)


def to_idempotent(w: Bicomplex) -> IdempotentPair:
    return w.idempotent


def from_idempotent(pair: IdempotentPair) -> Bicomplex:
    return Bicomplex.from_pair(pair.plus, pair.minus)


def bconj(w: Bicomplex) -> Bicomplex:
    """Bicomplex conjugate z1 - j z2 (no complex conjugation of the parts)."""
    return Bicomplex(w.sc, -w.vec)


def bnorm(w: Bicomplex):
    """sqrt((|w+|^2 + |w-|^2) / 2); equals the Euclidean norm of (z1, z2)."""
    return np.sqrt((np.abs(w.plus) ** 2 + np.abs(w.minus) ** 2) / 2)


def bicomplexify(u: ComplexLike) -> Bicomplex:
    """Map x + iy to x + jy."""
    u = np.asarray(u, dtype=complex) if isinstance(u, np.ndarray) else complex(u)
    return Bicomplex(np.real(u), np.imag(u))


def is_zero_divisor(w: Bicomplex, tol: float | None = None) -> bool:
    """
    True when ``w`` is nonzero but one idempotent component vanishes.

    The default tolerance is ``1e-12 * bnorm(w)``.
    """
    if np.shape(w.sc) or np.shape(w.vec):
        raise ValueError("is_zero_divisor expects a single bicomplex number")
    n = float(bnorm(w))
    if tol is None:
        tol = 1e-12 * n
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if n <= tol:
        return False
    return min(abs(w.plus), abs(w.minus)) <= tol

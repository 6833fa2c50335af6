"""
p-atoms on the circle and finite atomic decompositions.

An atom is stored as piecewise-constant values on equal cells of its arc
``J = [start, start + length]`` (with ``0 <= start`` and
``start + length <= 2 pi``, so the angle used in the moment conditions is a
continuous coordinate on ``J``).  Moments of piecewise-constant profiles are
exact polynomial integrals, so validation is free of quadrature error.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from .boundary import BoundaryDistribution

__all__ = [
    "PAtom",
    "AtomValidation",
    "AtomicDecomposition",
    "BCAtomicBoundary",
    "moment_orders",
    "validate_atom",
    "random_atom",
    "atomic_norm_upper",
    "bc_atomic_norm",
    "quasi_norm_b",
    "synthesize_boundary",
    "load_decomposition_json",
    "dump_decomposition_json",
]

TWO_PI = 2 * np.pi


def moment_orders(p: float) -> range:
    """Orders ``k`` with ``0 <= k <= 1/p - 1`` (a small slack absorbs rounding in 1/p)."""
    return range(0, int(math.floor(1.0 / p - 1.0 + 1e-9)) + 1)


@dataclass(frozen=True, eq=False)
class PAtom:
    """
    Piecewise-constant candidate atom.

    ``values[j]`` is the value on the ``j``-th of ``len(values)`` equal
    cells of the arc.  Nothing is validated at construction; use
    :func:`validate_atom`.
    """

    p: float
    start: float
    length: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.atleast_1d(np.asarray(self.values, dtype=complex)))

    @property
    def arc(self):
        return (self.start, self.length)

    @property
    def edges(self) -> np.ndarray:
        return self.start + self.length * np.linspace(0.0, 1.0, len(self.values) + 1)

    def __call__(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        e = self.edges
        idx = np.searchsorted(e, theta, side="right") - 1
        inside = (theta >= e[0]) & (theta < e[-1])
        out = np.zeros(theta.shape, dtype=complex)
        out[inside] = self.values[np.clip(idx[inside], 0, len(self.values) - 1)]
        return out

    def moment(self, k: int) -> complex:
        """``int a(theta) theta^k d theta`` in closed form."""
        e = self.edges
        return complex(np.sum(self.values * (e[1:] ** (k + 1) - e[:-1] ** (k + 1))) / (k + 1))

    def integral_against(self, n: int) -> complex:
        """``int a(theta) e^{-i n theta} d theta`` in closed form."""
        e = self.edges
        if n == 0:
            return complex(np.sum(self.values * np.diff(e)))
        prim = np.exp(-1j * n * e) / (-1j * n)
        return complex(np.sum(self.values * np.diff(prim)))

    def scaled(self, c) -> "PAtom":
        return PAtom(self.p, self.start, self.length, self.values * c)

    def to_dict(self):
        return {
            "p": self.p,
            "arc": [self.start, self.length],
            "profile": [[float(v.real), float(v.imag)] for v in self.values],
        }


@dataclass
class AtomValidation:
    valid: bool
    violations: List[str] = field(default_factory=list)
    moments: List[complex] = field(default_factory=list)
    sup: float = 0.0
    bound: float = 0.0

    def __bool__(self):
        return self.valid


def validate_atom(a: PAtom, tol: Optional[float] = None) -> AtomValidation:
    """
    Check support, size and moment conditions.

    Moments use the angle itself as variable, for ``k <= 1/p - 1``; the
    default tolerance is ``1e-10 * |J|^(1 - 1/p)``.
    """
    viol = []
    if not 0 < a.p <= 1:
        viol.append(f"p = {a.p} outside (0, 1]")
    if not (a.length > 0 and a.start >= 0 and a.start + a.length <= TWO_PI * (1 + 1e-15)):
        viol.append("arc must satisfy 0 <= start, 0 < length, start + length <= 2 pi")
    length = max(a.length, 1e-300)
    bound = length ** (-1.0 / a.p) if a.p > 0 else math.inf
    sup = float(np.max(np.abs(a.values))) if a.values.size else 0.0
    if sup > bound * (1 + 1e-12):
        viol.append(f"size: sup |a| = {sup:.6g} exceeds |J|^(-1/p) = {bound:.6g}")
    if tol is None:
        tol = 1e-10 * length ** (1.0 - 1.0 / a.p) if a.p > 0 else 0.0
    moments = []
    if a.p > 0:
        for k in moment_orders(a.p):
            m = a.moment(k)
            moments.append(m)
            if abs(m) > tol:
                viol.append(f"moment k={k}: |int a theta^k| = {abs(m):.3g} > {tol:.3g}")
    return AtomValidation(not viol, viol, moments, sup, bound)


def random_atom(rng: np.random.Generator, p: float, n_cells: int | None = None,
                min_length: float = 0.05, max_tries: int = 100) -> PAtom:
    """
    Draw a valid p-atom.

    The arc is uniform among arcs inside ``[0, 2 pi]`` of length at least
    ``min_length``; the profile is Gaussian on equal cells, projected onto
    the null space of the moment functionals, then scaled so its sup is a
    random fraction in (0.5, 1] of ``|J|^(-1/p)``.  Draws failing
    :func:`validate_atom` are rejected and redrawn.
    """
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    orders = list(moment_orders(p))
    n = n_cells or max(4, 2 * len(orders) + 2)
    if n <= len(orders):
        raise ValueError("need more cells than moment conditions")
    for _ in range(max_tries):
        length = rng.uniform(min_length, TWO_PI)
        start = rng.uniform(0.0, TWO_PI - length)
        e = start + length * np.linspace(0, 1, n + 1)
        M = np.array([(e[1:] ** (k + 1) - e[:-1] ** (k + 1)) / (k + 1) for k in orders])
        basis = null_space(M)
        v = basis @ rng.standard_normal(basis.shape[1])
        top = np.max(np.abs(v))
        if top == 0:
            continue
        v = v / top * length ** (-1.0 / p) * rng.uniform(0.5, 1.0)
        atom = PAtom(p, start, length, v)
        if validate_atom(atom):
            return atom
    raise RuntimeError("random_atom: no valid atom after rejection sampling")


@dataclass
class AtomicDecomposition:
    """Finite sum ``sum c_n a_n`` of atoms sharing one exponent ``p``."""

    coefficients: Sequence[complex]
    atoms: Sequence[PAtom]
    p: float

    def __post_init__(self):
        self.coefficients = [complex(c) for c in self.coefficients]
        self.atoms = list(self.atoms)
        if len(self.coefficients) != len(self.atoms):
            raise ValueError("one coefficient per atom")
        if any(abs(a.p - self.p) > 1e-15 for a in self.atoms):
            raise ValueError("all atoms must share the decomposition's p")

    @classmethod
    def empty(cls, p: float = 1.0) -> "AtomicDecomposition":
        return cls([], [], p)

    def __len__(self):
        return len(self.atoms)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for c, a in zip(self.coefficients, self.atoms):
            out += c * a(theta)
        return out

    @property
    def breakpoints(self):
        pts = set()
        for a in self.atoms:
            pts.update(float(x) for x in a.edges)
        return tuple(sorted(pts))

    def conj(self) -> "AtomicDecomposition":
        return AtomicDecomposition(
            [np.conj(c) for c in self.coefficients],
            [PAtom(a.p, a.start, a.length, np.conj(a.values)) for a in self.atoms],
            self.p,
        )

    def validate(self):
        return [validate_atom(a) for a in self.atoms]

    def to_distribution(self) -> BoundaryDistribution:
        return BoundaryDistribution.from_density(self, self.breakpoints, name="atomic sum",
                                                 source=self, kind="atomic")


def atomic_norm_upper(d: AtomicDecomposition) -> float:
    """``(sum |c_n|^p)^(1/p)``: an upper bound for the atomic norm, never the infimum."""
    if not len(d):
        return 0.0
    c = np.abs(np.asarray(d.coefficients))
    return float(np.sum(c ** d.p) ** (1.0 / d.p))


@dataclass
class BCAtomicBoundary:
    """
    ``p+ (sum c+ a+)* + p- sum c- a- [+ tail]``.

    ``tail`` is an optional bicomplex boundary object (a restriction such
    as ``TB(w)`` on the circle); ``q`` is the exponent of the source that
    produced it, used to check admissible ``gamma`` in :func:`quasi_norm_b`.
    """

    plus: AtomicDecomposition
    minus: AtomicDecomposition
    tail: Optional[BoundaryDistribution] = None
    q: Optional[float] = None

    def __post_init__(self):
        if self.tail is not None and self.tail.codomain != "bicomplex":
            raise TypeError("tail must be a bicomplex boundary object")

    @property
    def p(self) -> float:
        return self.plus.p if len(self.plus) else self.minus.p

    def atomic_part(self) -> "BCAtomicBoundary":
        return BCAtomicBoundary(self.plus, self.minus)


def bc_atomic_norm(b: BCAtomicBoundary) -> float:
    """Sum of the two component upper bounds; rejects objects with a tail."""
    if b.tail is not None:
        raise ValueError("boundary has a tail; use quasi_norm_b")
    return atomic_norm_upper(b.plus) + atomic_norm_upper(b.minus)


def quasi_norm_b(b: BCAtomicBoundary, gamma: float, q: Optional[float] = None) -> float:
    """
    ``||atomic part||_{B,at} + ||tail||_{L^gamma}``.

    ``gamma`` must lie in ``(1, q/(2 - q))`` for the source exponent ``q``
    (the upper end is infinite when ``q >= 2``).
    """
    q = q if q is not None else b.q
    if q is None:
        raise ValueError("quasi_norm_b needs the source exponent q")
    upper = math.inf if q >= 2 else q / (2 - q)
    if not 1 < gamma < upper:
        raise ValueError(f"gamma = {gamma} outside (1, {upper:g}) for q = {q}")
    val = bc_atomic_norm(b.atomic_part())
    if b.tail is not None:
        val += b.tail.lp_norm(gamma)
    return val


def synthesize_boundary(b: BCAtomicBoundary) -> BoundaryDistribution:
    """Density ``p+ (sum c+ a+)* + p- sum c- a- [+ tail]`` as a bicomplex boundary object."""
    plus_sum, minus_sum = b.plus.conj(), b.minus
    plus = BoundaryDistribution.from_density(
        plus_sum, plus_sum.breakpoints, name="(sum c+ a+)*", source=plus_sum, kind="atomic")
    minus = BoundaryDistribution.from_density(
        minus_sum, minus_sum.breakpoints, name="sum c- a-", source=minus_sum, kind="atomic")
    out = BoundaryDistribution.bicomplex(plus, minus, name="synthesized")
    if not len(plus_sum) and not len(minus_sum):
        out = BoundaryDistribution.bicomplex(BoundaryDistribution.zero(), BoundaryDistribution.zero())
    if b.tail is not None:
        out = out + b.tail
    return out


# ----------------------------------------------------------------------
# JSON fixtures
# ----------------------------------------------------------------------
def _num(x):
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return complex(x)


def load_decomposition_json(source) -> AtomicDecomposition:
    """
    Read ``{"p": ..., "arcs": [[start, length], ...], "profiles": [[v, ...], ...],
    "coefficients": [...]}``; complex numbers may be written as ``[re, im]``.
    Accepts a path or an already-parsed dict.
    """
    data = source if isinstance(source, dict) else json.loads(open(source).read())
    unknown = set(data) - {"p", "arcs", "profiles", "coefficients"}
    if unknown:
        raise ValueError(f"unknown keys in atom fixture: {sorted(unknown)}")
    p = float(data["p"])
    arcs, profiles = data["arcs"], data["profiles"]
    coeffs = data.get("coefficients", [1.0] * len(arcs))
    if not len(arcs) == len(profiles) == len(coeffs):
        raise ValueError("arcs, profiles and coefficients must have equal length")
    atoms = [PAtom(p, float(s), float(L), [_num(v) for v in prof])
             for (s, L), prof in zip(arcs, profiles)]
    return AtomicDecomposition([_num(c) for c in coeffs], atoms, p)


def dump_decomposition_json(d: AtomicDecomposition) -> dict:
    return {
        "p": d.p,
        "arcs": [[a.start, a.length] for a in d.atoms],
        "profiles": [[[float(v.real), float(v.imag)] for v in a.values] for a in d.atoms],
        "coefficients": [[c.real, c.imag] for c in d.coefficients],
    }

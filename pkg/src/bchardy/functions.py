"""
Complex- and bicomplex-valued functions on the unit disk.

Two kinds exist.  *Generators* are closed forms that evaluate anywhere in
the disk and, where possible, know their own Wirtinger derivatives.
*Sampled* functions hold values on a :class:`~bchardy.grid.PolarGrid` and
evaluate off-grid by bilinear interpolation in ``(r, theta)``.

A bicomplex function is kept in idempotent form ``p+ f+ + p- f-`` as a pair
of complex :class:`DiskFunction` objects.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from .bicomplex import Bicomplex, as_bicomplex
from .grid import PolarGrid, radial_derivative_matrix, spectral_theta_derivative

__all__ = [
    "DiskFunction",
    "Polynomial",
    "TaylorSeries",
    "Pole",
    "Generic",
    "Sampled",
    "BicomplexFunction",
    "DerivativeReport",
    "ResolutionError",
    "evaluate",
    "wirtinger_dz",
    "wirtinger_dzbar",
    "bc_partial",
    "bc_partialbar",
    "bc_partialbar_power",
    "wirtinger_at",
    "bc_partialbar_at",
    "make_test_function",
    "zhat",
    "zstarhat",
    "bc_polynomial",
    "sample",
    "write_csv",
    "read_csv",
]


class ResolutionError(RuntimeError):
    """A numerical derivative's estimated error exceeds the requested tolerance."""


class DiskFunction:
    """Base class for complex-valued functions on the unit disk."""

    codomain = "complex"
    #: whether values on |z| = 1 are meaningful (continuous extension)
    closed = False
    #: generator vs sampled
    kind = "generator"
    #: largest p with f in H^p (None: not holomorphic / unknown)
    hardy_p_max: Optional[float] = None
    name = "f"

    def __call__(self, z):
        raise NotImplementedError

    # closed-form derivatives; None when unavailable
    def dz(self) -> Optional["DiskFunction"]:
        return None

    def dzbar(self) -> Optional["DiskFunction"]:
        return None

    def conjugate(self) -> "DiskFunction":
        return Conjugate(self)

    def __add__(self, other):
        if isinstance(other, BicomplexFunction):
            return NotImplemented
        return LinearCombination.of(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * _lift(other)

    def __rsub__(self, other):
        return _lift(other) + (-1.0) * self

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, c):
        if isinstance(c, (DiskFunction, BicomplexFunction)):
            return NotImplemented
        return LinearCombination([(complex(c), self)])

    __rmul__ = __mul__

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def _lift(other) -> DiskFunction:
    if isinstance(other, DiskFunction):
        return other
    return Polynomial({(0, 0): complex(other)})


def evaluate(f, z):
    """Evaluate ``f`` at points strictly inside the unit disk."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("evaluation point outside the open unit disk")
    out = f(z)
    if isinstance(out, Bicomplex):
        return out if np.ndim(z) else Bicomplex(complex(out.sc), complex(out.vec))
    return out if np.ndim(z) else complex(out)


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------
class Polynomial(DiskFunction):
    """``sum c_ab z^a (z*)^b`` with exact Wirtinger derivatives."""

    closed = True

    def __init__(self, coeffs: Mapping[Tuple[int, int], complex], name: str | None = None):
        self.coeffs: Dict[Tuple[int, int], complex] = {
            (int(a), int(b)): complex(c) for (a, b), c in coeffs.items() if c != 0
        }
        self.name = name or _poly_name(self.coeffs)
        if all(b == 0 for _, b in self.coeffs):
            self.hardy_p_max = math.inf

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        zc = np.conj(z)
        out = np.zeros(z.shape, dtype=complex)
        for (a, b), c in self.coeffs.items():
            out = out + c * z**a * zc**b
        return out

    def dz(self):
        return Polynomial({(a - 1, b): a * c for (a, b), c in self.coeffs.items() if a > 0})

    def dzbar(self):
        return Polynomial({(a, b - 1): b * c for (a, b), c in self.coeffs.items() if b > 0})

    def conjugate(self):
        return Polynomial({(b, a): np.conj(c) for (a, b), c in self.coeffs.items()})

    def __add__(self, other):
        if isinstance(other, Polynomial):
            coeffs = dict(self.coeffs)
            for k, c in other.coeffs.items():
                coeffs[k] = coeffs.get(k, 0) + c
            return Polynomial(coeffs)
        if isinstance(other, (int, float, complex)):
            return self + Polynomial({(0, 0): other})
        return super().__add__(other)

    __radd__ = __add__

    def __mul__(self, c):
        if isinstance(c, Polynomial):
            coeffs: Dict[Tuple[int, int], complex] = {}
            for (a, b), u in self.coeffs.items():
                for (m, n), v in c.coeffs.items():
                    coeffs[(a + m, b + n)] = coeffs.get((a + m, b + n), 0) + u * v
            return Polynomial(coeffs)
        if isinstance(c, (int, float, complex, np.number)):
            return Polynomial({k: v * c for k, v in self.coeffs.items()})
        return super().__mul__(c)

    __rmul__ = __mul__


def _poly_name(coeffs):
    if not coeffs:
        return "0"
    terms = []
    for (a, b), c in sorted(coeffs.items()):
        t = f"{c:g}"
        if a:
            t += f"*z^{a}"
        if b:
            t += f"*conj(z)^{b}"
        terms.append(t)
    return " + ".join(terms)


class TaylorSeries(DiskFunction):
    """Holomorphic ``sum_n c_n z^n`` (finitely many terms)."""

    closed = True

    def __init__(self, coeffs, name: str | None = None, hardy_p_max: float = math.inf):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.name = name or f"taylor[{len(self.coeffs)}]"
        self.hardy_p_max = hardy_p_max

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def dz(self):
        n = np.arange(1, len(self.coeffs))
        return TaylorSeries(self.coeffs[1:] * n, name=f"d/dz {self.name}")

    def dzbar(self):
        return Polynomial({})


class Pole(DiskFunction):
    """``scale * (1 - z/center)^(-alpha)`` with ``|center| >= 1``.

    The principal branch is used; ``1 - z/center`` has positive real part
    in the disk so the function is holomorphic there.
    """

    def __init__(self, alpha: float, center: complex = 1.0, scale: complex = 1.0):
        if abs(center) < 1.0:
            raise ValueError("pole must lie on or outside the unit circle")
        self.alpha = float(alpha)
        self.center = complex(center)
        self.scale = complex(scale)
        self.name = f"(1 - z/{center:g})^-{alpha:g}"
        self.closed = abs(self.center) > 1.0 or self.alpha <= 0
        # |1 - z|^(-alpha p) integrable on the circle iff alpha p < 1
        if abs(self.center) > 1.0 or self.alpha <= 0:
            self.hardy_p_max = math.inf
        else:
            self.hardy_p_max = 1.0 / self.alpha

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.scale * (1.0 - z / self.center) ** (-self.alpha)

    def dz(self):
        if self.alpha == 0:
            return Polynomial({})
        return Pole(self.alpha + 1, self.center, self.scale * self.alpha / self.center)

    def dzbar(self):
        return Polynomial({})


class Generic(DiskFunction):
    """Wrap an arbitrary vectorised callable, optionally with derivatives."""

    def __init__(
        self,
        func: Callable,
        dz: Optional[DiskFunction | Callable] = None,
        dzbar: Optional[DiskFunction | Callable] = None,
        closed: bool = False,
        name: str = "f",
        hardy_p_max: Optional[float] = None,
    ):
        self.func = func
        self._dz = dz if (dz is None or isinstance(dz, DiskFunction)) else Generic(dz, closed=closed)
        self._dzbar = (
            dzbar if (dzbar is None or isinstance(dzbar, DiskFunction)) else Generic(dzbar, closed=closed)
        )
        self.closed = closed
        self.name = name
        self.hardy_p_max = hardy_p_max

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.func(z), dtype=complex) * np.ones(z.shape)

    def dz(self):
        return self._dz

    def dzbar(self):
        return self._dzbar


class Conjugate(DiskFunction):
    """Pointwise complex conjugate of another function."""

    def __init__(self, base: DiskFunction):
        self.base = base
        self.closed = base.closed
        self.kind = base.kind
        self.name = f"conj({base.name})"

    def __call__(self, z):
        return np.conj(self.base(z))

    def dz(self):
        d = self.base.dzbar()
        return None if d is None else d.conjugate()

    def dzbar(self):
        d = self.base.dz()
        return None if d is None else d.conjugate()

    def conjugate(self):
        return self.base


class LinearCombination(DiskFunction):
    """``sum c_k f_k``; derivatives exist when every term has one."""

    def __init__(self, terms):
        self.terms = [(complex(c), f) for c, f in terms]
        self.closed = all(f.closed for _, f in self.terms)
        self.kind = "sampled" if any(f.kind == "sampled" for _, f in self.terms) else "generator"
        self.name = " + ".join(f"{c:g}*{f.name}" for c, f in self.terms)
        ps = [f.hardy_p_max for _, f in self.terms]
        self.hardy_p_max = None if any(p is None for p in ps) else min(ps, default=math.inf)

    @classmethod
    def of(cls, a: DiskFunction, b: DiskFunction):
        ta = a.terms if isinstance(a, LinearCombination) else [(1.0, a)]
        tb = b.terms if isinstance(b, LinearCombination) else [(1.0, b)]
        return cls(ta + tb)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c, f in self.terms:
            out = out + c * f(z)
        return out

    def _derived(self, attr):
        parts = []
        for c, f in self.terms:
            d = getattr(f, attr)()
            if d is None:
                return None
            parts.append((c, d))
        return LinearCombination(parts)

    def dz(self):
        return self._derived("dz")

    def dzbar(self):
        return self._derived("dzbar")

    def conjugate(self):
        return LinearCombination([(np.conj(c), f.conjugate()) for c, f in self.terms])

    def __mul__(self, c):
        if isinstance(c, (DiskFunction, BicomplexFunction)):
            return NotImplemented
        return LinearCombination([(c * k, f) for k, f in self.terms])

    __rmul__ = __mul__


# ----------------------------------------------------------------------
# sampled functions
# ----------------------------------------------------------------------
class Sampled(DiskFunction):
    """
    Values on a polar grid, interpolated bilinearly in ``(r, theta)``.

    Below the innermost radius the interpolant blends linearly toward the
    ring mean (the value at the origin to O(r_0^2)); beyond the outermost
    radius it extrapolates linearly, which makes values on the closed disk
    available to boundary routines.
    """

    kind = "sampled"
    closed = True

    def __init__(self, grid: PolarGrid, values: np.ndarray, name: str = "sampled"):
        values = np.asarray(values, dtype=complex)
        if values.shape != grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {grid.shape}")
        self.grid = grid
        self.values = values
        self.name = name
        self._center = values[0].mean()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        z = z.ravel()
        g = self.grid
        r = np.abs(z)
        u = np.mod(np.angle(z), 2 * np.pi) / g.dtheta
        k0 = np.floor(u).astype(int) % g.n_theta
        k1 = (k0 + 1) % g.n_theta
        s = u - np.floor(u)
        rad = g.radii
        i1 = np.clip(np.searchsorted(rad, r), 1, g.n_r - 1)
        i0 = i1 - 1
        v = self.values
        ring0 = (1 - s) * v[i0, k0] + s * v[i0, k1]
        ring1 = (1 - s) * v[i1, k0] + s * v[i1, k1]
        t = (r - rad[i0]) / (rad[i1] - rad[i0])
        out = (1 - t) * ring0 + t * ring1
        inner = r < rad[0]
        if np.any(inner):
            w = r[inner] / rad[0]
            out[inner] = (1 - w) * self._center + w * ring0[inner]
        return out.reshape(shape)

    def on_grid(self) -> np.ndarray:
        return self.values


def sample(f, grid: PolarGrid):
    """Materialise a (complex or bicomplex) function on ``grid``."""
    if isinstance(f, BicomplexFunction):
        return BicomplexFunction(sample(f.plus, grid), sample(f.minus, grid), name=f.name)
    if isinstance(f, Sampled) and f.grid == grid:
        return f
    return Sampled(grid, f(grid.points), name=f.name)


# ----------------------------------------------------------------------
# bicomplex functions
# ----------------------------------------------------------------------
class BicomplexFunction:
    """Bicomplex-valued ``p+ f+ + p- f-`` stored as a pair of complex functions."""

    codomain = "bicomplex"

    def __init__(self, plus: DiskFunction, minus: DiskFunction, name: str | None = None):
        self.plus = _lift(plus)
        self.minus = _lift(minus)
        self.name = name or f"p+({self.plus.name}) + p-({self.minus.name})"

    @classmethod
    def from_cartesian(cls, sc: DiskFunction, vec: DiskFunction, name: str | None = None):
        sc, vec = _lift(sc), _lift(vec)
        return cls(sc - 1j * vec, sc + 1j * vec, name=name)

    @classmethod
    def constant(cls, c) -> "BicomplexFunction":
        c = as_bicomplex(c)
        return cls(Polynomial({(0, 0): c.plus}), Polynomial({(0, 0): c.minus}), name=f"{c}")

    @property
    def closed(self):
        return self.plus.closed and self.minus.closed

    @property
    def kind(self):
        return "sampled" if "sampled" in (self.plus.kind, self.minus.kind) else "generator"

    def __call__(self, z) -> Bicomplex:
        return Bicomplex.from_pair(self.plus(z), self.minus(z))

    def __add__(self, other):
        other = _lift_bc(other)
        return BicomplexFunction(self.plus + other.plus, self.minus + other.minus)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift_bc(other)
        return BicomplexFunction(self.plus - other.plus, self.minus - other.minus)

    def __rsub__(self, other):
        return _lift_bc(other) - self

    def __neg__(self):
        return BicomplexFunction(-1.0 * self.plus, -1.0 * self.minus)

    def __mul__(self, c):
        if isinstance(c, Bicomplex):
            return BicomplexFunction(c.plus * self.plus, c.minus * self.minus)
        if isinstance(c, (DiskFunction, BicomplexFunction)):
            return NotImplemented
        return BicomplexFunction(complex(c) * self.plus, complex(c) * self.minus)

    __rmul__ = __mul__

    def __repr__(self):
        return f"<BicomplexFunction {self.name}>"


def _lift_bc(other) -> BicomplexFunction:
    if isinstance(other, BicomplexFunction):
        return other
    if isinstance(other, DiskFunction):
        # complex-valued functions embed with equal idempotent components
        return BicomplexFunction(other, other)
    return BicomplexFunction.constant(other)


def zhat() -> BicomplexFunction:
    """Bicomplexification x + jy of z, i.e. p+ z* + p- z."""
    return BicomplexFunction(Polynomial({(0, 1): 1.0}), Polynomial({(1, 0): 1.0}), name="zhat")


def zstarhat() -> BicomplexFunction:
    """Bicomplexification x - jy of z*, i.e. p+ z + p- z*."""
    return BicomplexFunction(Polynomial({(1, 0): 1.0}), Polynomial({(0, 1): 1.0}), name="zstarhat")


def bc_polynomial(coeffs: Mapping[Tuple[int, int], complex]) -> BicomplexFunction:
    """``sum c_ab zhat^a zstarhat^b`` with complex coefficients.

    In idempotent form zhat^a zstarhat^b = p+ (z*)^a z^b + p- z^a (z*)^b.
    """
    plus = Polynomial({(b, a): c for (a, b), c in coeffs.items()})
    minus = Polynomial({(a, b): c for (a, b), c in coeffs.items()})
    return BicomplexFunction(plus, minus, name="bc_poly")


# ----------------------------------------------------------------------
# derivatives
# ----------------------------------------------------------------------
@dataclass
class DerivativeReport:
    values: object  # DiskFunction or BicomplexFunction
    scheme: str
    est_error: float
    tol: float = math.inf

    @property
    def ok(self) -> bool:
        return self.est_error <= self.tol

    def require(self) -> "DerivativeReport":
        if not self.ok:
            raise ResolutionError(
                f"derivative est_error {self.est_error:.3g} exceeds tolerance {self.tol:.3g}"
            )
        return self


DEFAULT_DERIVATIVE_GRID = PolarGrid(32, 128)


def _polar_to_wirtinger(dr, dth, grid, which):
    th = grid.angles[None, :]
    r = grid.radii[:, None]
    if which == "dz":
        return 0.5 * np.exp(-1j * th) * (dr - 1j * dth / r)
    return 0.5 * np.exp(1j * th) * (dr + 1j * dth / r)


def _grid_derivative(values, grid, which):
    dr = radial_derivative_matrix(grid.radii) @ values
    dth = spectral_theta_derivative(values)
    return _polar_to_wirtinger(dr, dth, grid, which)


def _sampled_derivative(f: Sampled, which, r_interior):
    g = f.grid
    full = _grid_derivative(f.values, g, which)
    # same differentiation on every other radius and angle -> error estimate
    sub_r = np.arange(0, g.n_r, 2)
    sub_t = np.arange(0, g.n_theta, 2)
    sub_vals = f.values[np.ix_(sub_r, sub_t)]
    dr = radial_derivative_matrix(g.radii[sub_r]) @ sub_vals
    dth = spectral_theta_derivative(sub_vals)
    th = g.angles[sub_t][None, :]
    r = g.radii[sub_r][:, None]
    if which == "dz":
        coarse = 0.5 * np.exp(-1j * th) * (dr - 1j * dth / r)
    else:
        coarse = 0.5 * np.exp(1j * th) * (dr + 1j * dth / r)
    mask = g.radii[sub_r] <= r_interior
    diff = np.abs(coarse - full[np.ix_(sub_r, sub_t)])[mask]
    est = float(diff.max()) if diff.size else 0.0
    return Sampled(g, full, name=f"{which} {f.name}"), est


def _callable_derivative(f, grid, which, h):
    """Spectral in theta, 4th-order differences in r; Cartesian near r = 0."""
    r = grid.radii[:, None]
    th = grid.angles[None, :]
    e = np.exp(1j * th)
    vals = f(grid.points)
    dth = spectral_theta_derivative(vals)
    # radial stencil, shifted one-sided where it would leave the disk
    offsets = np.array([-2, -1, 0, 1, 2], dtype=float)
    dr = np.zeros(grid.shape, dtype=complex)
    for i, ri in enumerate(grid.radii):
        shift = -2.0 if ri + 2 * h >= 1.0 else 0.0
        nodes = ri + (offsets + shift) * h
        w = _fd_weights(ri, nodes)
        samples = np.stack([f(x * e[0]) for x in nodes])
        dr[i] = w @ samples
    out = _polar_to_wirtinger(dr, dth, grid, which)
    near0 = grid.radii < 2 * h
    if np.any(near0):
        z0 = grid.points[near0]
        fx = (
            -f(z0 + 2 * h) + 8 * f(z0 + h) - 8 * f(z0 - h) + f(z0 - 2 * h)
        ) / (12 * h)
        fy = (
            -f(z0 + 2j * h) + 8 * f(z0 + 1j * h) - 8 * f(z0 - 1j * h) + f(z0 - 2j * h)
        ) / (12 * h)
        out[near0] = 0.5 * (fx - 1j * fy) if which == "dz" else 0.5 * (fx + 1j * fy)
    return out


def _fd_weights(x0, nodes):
    from .grid import fornberg_weights

    return fornberg_weights(x0, nodes, 1)


def _complex_derivative(f: DiskFunction, which, grid, tol, r_interior) -> DerivativeReport:
    closed = getattr(f, which)()
    if closed is not None:
        return DerivativeReport(closed, "closed-form", 0.0, tol)
    if isinstance(f, Sampled):
        g = f.grid if grid is None else grid
        if g != f.grid:
            f = sample(f, g)
        vals, est = _sampled_derivative(f, which, r_interior)
        return DerivativeReport(vals, "spectral-theta/fd-r", est, tol)
    g = grid or DEFAULT_DERIVATIVE_GRID
    h = 0.25 / g.n_r
    d1 = _callable_derivative(f, g, which, h)
    d2 = _callable_derivative(f, g, which, h / 2)
    mask = g.interior_mask(r_interior)
    est = float(np.max(np.abs(d1 - d2)[mask]))
    return DerivativeReport(Sampled(g, d2, name=f"{which} {f.name}"), "spectral-theta/fd-r", est, tol)


def wirtinger_at(f: DiskFunction, z, which: str = "dzbar", h: float = 1e-2):
    """
    Pointwise Wirtinger derivative by a 4th-order Cartesian stencil.

    Returns ``(values, est_error)`` where the estimate is the largest change
    between steps ``h`` and ``h/2``.  Meant for operator outputs that are
    only available point by point (each evaluation is a quadrature), so
    the caller controls exactly where ``f`` gets evaluated.
    """
    if which not in ("dz", "dzbar"):
        raise ValueError(f"unknown derivative {which!r}")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) + 2 * h >= 1):
        raise ValueError("stencil leaves the disk; move the points inward or shrink h")
    # one batched call: both step sizes, all eight offsets
    offs = np.array([2, 1, -1, -2, 2j, 1j, -1j, -2j])
    pts = z[..., None] + np.concatenate([offs * h, offs * h / 2])
    vals = f(pts)

    def combine(v, step):
        fx = (-v[..., 0] + 8 * v[..., 1] - 8 * v[..., 2] + v[..., 3]) / (12 * step)
        fy = (-v[..., 4] + 8 * v[..., 5] - 8 * v[..., 6] + v[..., 7]) / (12 * step)
        return 0.5 * (fx - 1j * fy) if which == "dz" else 0.5 * (fx + 1j * fy)

    d1 = combine(vals[..., :8], h)
    d2 = combine(vals[..., 8:], h / 2)
    est = float(np.max(np.abs(d1 - d2))) if d1.size else 0.0
    return d2, est


def bc_partialbar_at(f: "BicomplexFunction", z, h: float = 1e-2):
    """Pointwise bicomplex d-bar, ``(Bicomplex values, est_error)``."""
    a, ea = wirtinger_at(f.plus, z, "dz", h)
    b, eb = wirtinger_at(f.minus, z, "dzbar", h)
    return Bicomplex.from_pair(a, b), max(ea, eb)


def wirtinger_dz(f: DiskFunction, grid: PolarGrid | None = None, tol: float = 1e-6,
                 r_interior: float = 0.9) -> DerivativeReport:
    """``df/dz = (d_x - i d_y) f / 2``; closed form when the generator knows it."""
    return _complex_derivative(f, "dz", grid, tol, r_interior)


def wirtinger_dzbar(f: DiskFunction, grid: PolarGrid | None = None, tol: float = 1e-6,
                    r_interior: float = 0.9) -> DerivativeReport:
    """``df/dz* = (d_x + i d_y) f / 2``; closed form when the generator knows it."""
    return _complex_derivative(f, "dzbar", grid, tol, r_interior)


def _bc_derivative(f: BicomplexFunction, plus_op, minus_op, grid, tol, r_interior):
    a = plus_op(f.plus, grid, tol, r_interior)
    b = minus_op(f.minus, grid, tol, r_interior)
    scheme = a.scheme if a.scheme == b.scheme else f"{a.scheme}|{b.scheme}"
    return DerivativeReport(
        BicomplexFunction(a.values, b.values), scheme, max(a.est_error, b.est_error), tol
    )


def bc_partialbar(f: BicomplexFunction, grid: PolarGrid | None = None, tol: float = 1e-6,
                  r_interior: float = 0.9) -> DerivativeReport:
    """Bicomplex d-bar: ``(dbar f)+ = d f+/dz`` and ``(dbar f)- = d f-/dz*``."""
    return _bc_derivative(f, wirtinger_dz, wirtinger_dzbar, grid, tol, r_interior)


def bc_partial(f: BicomplexFunction, grid: PolarGrid | None = None, tol: float = 1e-6,
               r_interior: float = 0.9) -> DerivativeReport:
    """Bicomplex d: ``(d f)+ = d f+/dz*`` and ``(d f)- = d f-/dz``."""
    return _bc_derivative(f, wirtinger_dzbar, wirtinger_dz, grid, tol, r_interior)


def bc_partialbar_power(f: BicomplexFunction, k: int, grid: PolarGrid | None = None,
                        tol: float = 1e-6, r_interior: float = 0.9) -> DerivativeReport:
    """Apply d-bar ``k`` times; error estimates accumulate additively."""
    report = DerivativeReport(f, "closed-form", 0.0, tol)
    for _ in range(k):
        step = bc_partialbar(report.values, grid, tol, r_interior)
        scheme = report.scheme if step.scheme == report.scheme else step.scheme
        report = DerivativeReport(step.values, scheme, report.est_error + step.est_error, tol)
    return report


# ----------------------------------------------------------------------
# test-function catalog
# ----------------------------------------------------------------------
def _exp_generator():
    f = Generic(np.exp, closed=True, name="exp(z)", hardy_p_max=math.inf)
    f._dz = f
    f._dzbar = Polynomial({})
    return f


CATALOG = (
    "constant",
    "monomial",
    "conj-monomial",
    "polynomial",
    "pole",
    "taylor",
    "exp",
    "zhat",
    "zstarhat",
    "bc-holo",
    "bc-poly",
)


def make_test_function(name: str, *params, **kwargs):
    """
    Build a catalog function.

    ====================  ======================================================
    ``constant`` c        f = c
    ``monomial`` n        f = z^n
    ``conj-monomial`` n   f = (z*)^n
    ``polynomial`` d      f = sum d[(a, b)] z^a (z*)^b
    ``pole`` alpha        f = (1 - z)^(-alpha) (``center=`` moves the pole)
    ``taylor`` s, N       f = sum_{n<N} (n + 1)^(-s) z^n
    ``exp``               f = e^z
    ``zhat``              x + j y
    ``zstarhat``          x - j y
    ``bc-holo`` f+, f-    p+ f+ + p- f-  (component functions or catalog specs)
    ``bc-poly`` d         sum d[(a, b)] zhat^a zstarhat^b
    ====================  ======================================================
    """
    if name == "constant":
        (c,) = params or (kwargs.get("c", 1.0),)
        return Polynomial({(0, 0): c}, name=f"{c}")
    if name == "monomial":
        (n,) = params or (kwargs["n"],)
        return Polynomial({(int(n), 0): 1.0}, name=f"z^{n}")
    if name == "conj-monomial":
        (n,) = params or (kwargs["n"],)
        return Polynomial({(0, int(n)): 1.0}, name=f"conj(z)^{n}")
    if name == "polynomial":
        (coeffs,) = params or (kwargs["coeffs"],)
        return Polynomial(coeffs)
    if name == "pole":
        alpha = params[0] if params else kwargs.get("alpha", 1.0)
        center = params[1] if len(params) > 1 else kwargs.get("center", 1.0)
        return Pole(alpha, center=center)
    if name == "taylor":
        s = params[0] if params else kwargs.get("s", 2.0)
        n = params[1] if len(params) > 1 else kwargs.get("N", 32)
        coeffs = (np.arange(n) + 1.0) ** (-float(s))
        # sum |c_n|^2 < inf always holds for the truncated series
        return TaylorSeries(coeffs, name=f"taylor(s={s}, N={n})")
    if name == "exp":
        return _exp_generator()
    if name == "zhat":
        return zhat()
    if name == "zstarhat":
        return zstarhat()
    if name == "bc-holo":
        fp, fm = params if params else (kwargs["plus"], kwargs["minus"])
        return BicomplexFunction(_resolve(fp), _resolve(fm))
    if name == "bc-poly":
        (coeffs,) = params or (kwargs["coeffs"],)
        return bc_polynomial(coeffs)
    raise KeyError(f"unknown test function {name!r}; known: {', '.join(CATALOG)}")


def _resolve(spec):
    if isinstance(spec, DiskFunction):
        return spec
    if isinstance(spec, (int, float, complex)):
        return Polynomial({(0, 0): spec})
    if isinstance(spec, str):
        return {"z": Polynomial({(1, 0): 1.0}, name="z"),
                "z*": Polynomial({(0, 1): 1.0}, name="conj(z)")}.get(spec) or make_test_function(spec)
    name, *rest = spec
    return make_test_function(name, *rest)


# ----------------------------------------------------------------------
# CSV round trips
# ----------------------------------------------------------------------
CSV_COLUMNS = ("r", "theta", "re_sc", "im_sc", "re_vec", "im_vec")


def write_csv(f, path) -> None:
    """Write a sampled (complex or bicomplex) function in the columnar format."""
    if isinstance(f, BicomplexFunction):
        if not (isinstance(f.plus, Sampled) and isinstance(f.minus, Sampled)):
            raise TypeError("only sampled functions serialise; call sample() first")
        grid = f.plus.grid
        w = Bicomplex.from_pair(f.plus.values, f.minus.values)
        sc, vec = w.sc, w.vec
    else:
        if not isinstance(f, Sampled):
            raise TypeError("only sampled functions serialise; call sample() first")
        grid = f.grid
        sc, vec = f.values, np.zeros(grid.shape, dtype=complex)
    R, TH = np.meshgrid(grid.radii, grid.angles, indexing="ij")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(CSV_COLUMNS)
        for row in zip(R.ravel(), TH.ravel(), sc.real.ravel(), sc.imag.ravel(),
                       vec.real.ravel(), vec.imag.ravel()):
            out.writerow([f"{float(x):.17g}" for x in row])


def read_csv(path, codomain: str = "auto"):
    """Read the columnar format back; the grid is recovered from the node layout."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    radii = np.unique(data[:, 0])
    n_r = len(radii)
    n_theta = data.shape[0] // n_r
    grid = PolarGrid(n_r, n_theta)
    if not (np.allclose(grid.radii, radii, rtol=0, atol=1e-12)):
        raise ValueError("CSV radii are not a Gauss-Legendre polar grid")
    sc = (data[:, 2] + 1j * data[:, 3]).reshape(grid.shape)
    vec = (data[:, 4] + 1j * data[:, 5]).reshape(grid.shape)
    if codomain == "complex" or (codomain == "auto" and not np.any(vec)):
        return Sampled(grid, sc)
    w = Bicomplex(sc, vec)
    return BicomplexFunction(Sampled(grid, w.plus), Sampled(grid, w.minus))

"""
Area-integral operators on the unit disk.

``T(f)(z) = -(1/pi) iint_D f(zeta) / (zeta - z) dA`` (Cauchy-Pompeiu), its
bicomplex counterpart ``T_B``, and convolutions with the higher-order
kernels ``K_{m,gamma}``.

Every operator goes through one quadrature: the integrand is split with a
smooth radial partition of unity ``psi(|zeta - z| / rho0)``.  The far part
``(1 - psi) K f`` is smooth and summed on the global polar grid.  The near
part ``psi K f`` is integrated in local polar coordinates
``zeta = z + rho e^{i phi}``, where the Jacobian ``rho`` cancels the
``1/(zeta - z)`` singularity; a further substitution ``rho = rho_max s^2``
tames ``rho log rho`` for the logarithmic kernels.  Where the near disk
crosses the unit circle the angular range is split at the crossing angles so
each piece is smooth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numba
import numpy as np

from .bicomplex import Bicomplex
from .functions import BicomplexFunction, DiskFunction, Generic, Sampled, _lift_bc
from .grid import PolarGrid

__all__ = [
    "QuadratureScheme",
    "KernelId",
    "K01",
    "K10",
    "materialize_nest",
    "kernel_K",
    "convolve_kernel",
    "T",
    "TB",
    "materialize_T",
    "T_function",
    "TB_function",
    "materialize_TB",
    "iterated_TB",
    "oracle_quadrature",
]


def _psi(t):
    return np.exp(-36.0 * t**8)


@dataclass(frozen=True)
class QuadratureScheme:
    """
    Discretisation parameters for the area integrals.

    ``grid`` carries the far field; ``rho0`` is the near-field radius and
    ``n_rho`` x ``n_phi`` the local polar rule (``n_phi`` divisible by 4).
    """

    grid: PolarGrid = field(default_factory=PolarGrid.default)
    rho0: float = 0.4
    n_rho: int = 48
    n_phi: int = 128
    batch: int = 64

    def __post_init__(self):
        if self.n_phi % 4:
            raise ValueError("n_phi must be divisible by 4")
        if not 0 < self.rho0 <= 1:
            raise ValueError("rho0 must lie in (0, 1]")

    @classmethod
    def default(cls) -> "QuadratureScheme":
        return cls()

    @classmethod
    def coarse(cls, n_r: int = 32, n_theta: int = 128) -> "QuadratureScheme":
        """Cheaper scheme used when whole grids of values are materialised."""
        return cls(grid=PolarGrid(n_r, n_theta), n_rho=24, n_phi=64, batch=256)

    def refined(self) -> "QuadratureScheme":
        return QuadratureScheme(self.grid.refined(), self.rho0, self.n_rho, self.n_phi, self.batch)


@dataclass(frozen=True)
class KernelId:
    """Index ``(m, gamma)`` of the kernel ``K_{m,gamma}``; ``m + gamma >= 1``."""

    m: int
    gamma: int

    def __post_init__(self):
        if self.m < 0 or self.gamma < 0 or self.m + self.gamma < 1:
            raise ValueError(f"invalid kernel index ({self.m}, {self.gamma})")


def _harmonic(n):
    return sum(1.0 / k for k in range(1, n + 1))


def kernel_K(kid: KernelId, z):
    """
    Evaluate ``K_{m,gamma}(z)``.

    The three cases are implemented as printed, including the factors
    ``(-m)! (-1)^m`` and ``(-gamma)! (-1)^gamma`` that reduce to 1 on their
    cases.  ``z = 0`` is rejected.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("K_{m,gamma} is not defined at z = 0")
    m, g = kid.m, kid.gamma
    zc = np.conj(z)
    if m == 0:
        c = math.factorial(-m) * (-1) ** m / (math.factorial(g - 1) * math.pi)
        return c * z ** (m - 1) * zc ** (g - 1)
    if g == 0:
        c = math.factorial(-g) * (-1) ** g / (math.factorial(m - 1) * math.pi)
        return c * z ** (m - 1) * zc ** (g - 1)
    c = 1.0 / (math.factorial(m - 1) * math.factorial(g - 1) * math.pi)
    logterm = np.log(np.abs(z) ** 2) - _harmonic(m - 1) - _harmonic(g - 1)
    return c * z ** (m - 1) * zc ** (g - 1) * logterm


def _kernel_times_rho(kid: KernelId, rho, e):
    """``K(-rho e^{i phi}) * rho`` without forming 1/rho explicitly."""
    m, g = kid.m, kid.gamma
    u_dir = -e  # unit vector of z - zeta
    if m == 0 or g == 0:
        # K is homogeneous of degree m + g - 2
        scale = rho ** (m + g - 1)
        return kernel_K(kid, u_dir) * scale
    c = 1.0 / (math.factorial(m - 1) * math.factorial(g - 1) * math.pi)
    powers = u_dir ** (m - 1) * np.conj(u_dir) ** (g - 1) * rho ** (m + g - 1)
    logterm = np.log(rho**2) - _harmonic(m - 1) - _harmonic(g - 1)
    return c * powers * logterm


_GL_CACHE: dict = {}


def _gauss01(n):
    if n not in _GL_CACHE:
        t, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = ((t + 1) / 2, w / 2)
    return _GL_CACHE[n]


def _angular_rule(z: complex, rho0: float, n: int):
    """Nodes/weights in phi for the near disk around ``z``, split at kinks."""
    a = abs(z)
    brk = []
    if a + rho0 > 1.0 and a > 0:
        c = (1 - a * a - rho0 * rho0) / (2 * rho0 * a)
        if -1 < c < 1:
            d = math.acos(c)
            brk += [np.angle(z) - d, np.angle(z) + d]
        if a > 1 - 1e-12:
            brk += [np.angle(z) - math.pi / 2, np.angle(z) + math.pi / 2]
    if not brk:
        return 2 * np.pi * np.arange(n) / n, np.full(n, 2 * np.pi / n)
    brk = np.sort(np.mod(brk, 2 * np.pi))
    brk = np.append(brk, brk[0] + 2 * np.pi)
    per = n // (len(brk) - 1)
    s, w = _gauss01(per)
    nodes = np.concatenate([lo + (hi - lo) * s for lo, hi in zip(brk[:-1], brk[1:])])
    weights = np.concatenate([(hi - lo) * w for lo, hi in zip(brk[:-1], brk[1:])])
    pad = n - len(nodes)
    if pad:
        nodes = np.concatenate([nodes, np.zeros(pad)])
        weights = np.concatenate([weights, np.zeros(pad)])
    return nodes, weights


@numba.njit(cache=True)
def _cpow(u, k):
    out = 1.0 + 0.0j
    for _ in range(k):
        out *= u
    return out


@numba.njit(cache=True)
def _far_sum(z, src, fw, m, g, c, hsum, rho0):
    """Far-field sum of ``K(z - zeta) (1 - psi) f W`` over all grid nodes."""
    out = np.zeros(z.shape[0], dtype=np.complex128)
    inv_r2 = 1.0 / (rho0 * rho0)
    for i in range(z.shape[0]):
        acc = 0.0 + 0.0j
        zi = z[i]
        for j in range(src.shape[0]):
            d = zi - src[j]
            a2 = d.real * d.real + d.imag * d.imag
            if a2 == 0.0:
                continue
            t2 = a2 * inv_r2
            t4 = t2 * t2
            cut = -np.expm1(-36.0 * t4 * t4)
            dc = d.conjugate()
            if m == 0:
                k = dc / a2 * _cpow(dc, g - 1)
            elif g == 0:
                k = d / a2 * _cpow(d, m - 1)
            else:
                k = _cpow(d, m - 1) * _cpow(dc, g - 1) * (np.log(a2) - hsum)
            acc += k * cut * fw[j]
        out[i] = c * acc
    return out


def _kernel_constants(kid: KernelId):
    m, g = kid.m, kid.gamma
    if m == 0 or g == 0:
        return 1.0 / (math.factorial(max(m, g) - 1) * math.pi), 0.0
    c = 1.0 / (math.factorial(m - 1) * math.factorial(g - 1) * math.pi)
    return c, _harmonic(m - 1) + _harmonic(g - 1)


def _far_values(f: DiskFunction, grid: PolarGrid):
    if isinstance(f, Sampled) and f.grid == grid:
        return f.values
    return f(grid.points)


def _convolve(kid: KernelId, f: DiskFunction, z, scheme: QuadratureScheme, far_vals=None):
    """``iint_D K(z - zeta) f(zeta) dA`` for an array of targets ``z``."""
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    if np.any(np.abs(z) > 1 + 1e-12):
        raise ValueError("targets must lie in the closed unit disk")
    grid = scheme.grid
    src = grid.points.ravel()
    W = grid.weights.ravel()
    if far_vals is None:
        far_vals = _far_values(f, grid)
    fw = np.ascontiguousarray(W * far_vals.ravel(), dtype=complex)
    c_k, h_k = _kernel_constants(kid)
    s, ws = _gauss01(scheme.n_rho)
    out = np.empty(z.shape, dtype=complex)
    rho0 = scheme.rho0
    for start in range(0, len(z), scheme.batch):
        zb = z[start:start + scheme.batch]
        far = _far_sum(zb, src, fw, kid.m, kid.gamma, c_k, h_k, rho0)

        rules = [_angular_rule(zk, rho0, scheme.n_phi) for zk in zb]
        phi = np.array([r[0] for r in rules])
        wphi = np.array([r[1] for r in rules])
        e = np.exp(1j * phi)  # (B, n_phi)
        b = np.real(np.conj(zb)[:, None] * e)
        disc = np.maximum(b * b + 1 - np.minimum(np.abs(zb), 1.0)[:, None] ** 2, 0.0)
        rmax = np.clip(-b + np.sqrt(disc), 0.0, rho0)
        rho = rmax[..., None] * s**2  # (B, n_phi, n_rho)
        jac = rmax[..., None] * 2 * s * ws
        pts = zb[:, None, None] + rho * e[..., None]
        kr = _kernel_times_rho(kid, np.where(rho > 0, rho, 1.0), e[..., None])
        vals = f(pts)
        near = np.sum(
            np.where(rho > 0, kr * _psi(rho / rho0) * vals * jac, 0.0) * wphi[..., None],
            axis=(1, 2),
        )
        out[start:start + len(zb)] = far + near
    return out.reshape(shape)


K01 = KernelId(0, 1)
K10 = KernelId(1, 0)


def _scalar_out(z, out):
    return out if np.ndim(z) else complex(out)


def convolve_kernel(kid: KernelId, f: DiskFunction, z, scheme: QuadratureScheme | None = None):
    """``iint_D K_{m,gamma}(z - zeta) f(zeta) dA`` by the split quadrature."""
    scheme = scheme or QuadratureScheme()
    return _scalar_out(z, _convolve(kid, f, z, scheme))


def T(f: DiskFunction, z, scheme: QuadratureScheme | None = None):
    """Cauchy-Pompeiu operator ``-(1/pi) iint f(zeta)/(zeta - z) dA`` for ``|z| <= 1``."""
    if isinstance(f, BicomplexFunction):
        raise TypeError("T acts on complex-valued functions; use TB")
    scheme = scheme or QuadratureScheme()
    return _scalar_out(z, _convolve(K01, f, z, scheme))


def TB(f, z, scheme: QuadratureScheme | None = None) -> Bicomplex:
    """
    Bicomplex Theodorescu operator.

    The ``p+`` part integrates ``f+`` against ``-1/(pi (zeta* - z*))`` (the
    kernel ``K_{1,0}``), the ``p-`` part integrates ``f-`` against the
    Cauchy kernel; ``dbar TB(f) = f``.
    """
    f = _lift_bc(f)
    scheme = scheme or QuadratureScheme()
    plus = _convolve(K10, f.plus, z, scheme)
    minus = _convolve(K01, f.minus, z, scheme)
    if np.ndim(z):
        return Bicomplex.from_pair(plus, minus)
    return Bicomplex.from_pair(complex(plus), complex(minus))


def T_function(f: DiskFunction, scheme: QuadratureScheme | None = None) -> Generic:
    """``T(f)`` as a lazily evaluated disk function (one quadrature per call)."""
    scheme = scheme or QuadratureScheme()
    return Generic(lambda z: _convolve(K01, f, z, scheme), closed=True, name=f"T({f.name})")


def TB_function(f, scheme: QuadratureScheme | None = None) -> BicomplexFunction:
    """``TB(f)`` as a lazily evaluated bicomplex function."""
    f = _lift_bc(f)
    scheme = scheme or QuadratureScheme()
    plus = Generic(lambda z: _convolve(K10, f.plus, z, scheme), closed=True, name=f"TB+({f.name})")
    minus = Generic(lambda z: _convolve(K01, f.minus, z, scheme), closed=True, name=f"TB-({f.name})")
    return BicomplexFunction(plus, minus, name=f"TB({f.name})")


def materialize_T(f: DiskFunction, scheme: QuadratureScheme | None = None) -> Sampled:
    """``T(f)`` on every node of ``scheme.grid``, as a sampled function."""
    scheme = scheme or QuadratureScheme.coarse()
    vals = _convolve(K01, f, scheme.grid.points, scheme)
    return Sampled(scheme.grid, vals, name=f"T({f.name})")


def materialize_TB(f, scheme: QuadratureScheme | None = None) -> BicomplexFunction:
    """``TB(f)`` on every node of ``scheme.grid`` (write-once intermediate)."""
    f = _lift_bc(f)
    scheme = scheme or QuadratureScheme.coarse()
    pts = scheme.grid.points
    plus = Sampled(scheme.grid, _convolve(K10, f.plus, pts, scheme), name=f"TB+({f.name})")
    minus = Sampled(scheme.grid, _convolve(K01, f.minus, pts, scheme), name=f"TB-({f.name})")
    return BicomplexFunction(plus, minus, name=f"TB({f.name})")


def materialize_nest(levels: Sequence, w, scheme: QuadratureScheme | None = None):
    """
    Materialise ``TB(levels[0] + TB(levels[1] + ... + TB(w)))`` on the grid.

    Each intermediate is stored on the grid once and reused by the next
    level; memory is one grid of values per level.
    """
    scheme = scheme or QuadratureScheme.coarse()
    inner = materialize_TB(w, scheme)
    for phi in reversed(list(levels)):
        inner = materialize_TB(_lift_bc(phi) + inner, scheme)
    return inner


def iterated_TB(levels: Sequence, w, z, scheme: QuadratureScheme | None = None,
                inner_scheme: QuadratureScheme | None = None) -> Bicomplex:
    """
    Evaluate ``TB(Phi_1 + TB(Phi_2 + ... + Phi_{n-1} + TB(w)))`` at ``z``.

    ``levels = (Phi_1, ..., Phi_{n-1})``.  Inner levels are materialised on
    ``inner_scheme.grid`` (innermost first); the outermost operator is
    evaluated directly at ``z`` with ``scheme``.
    """
    levels = list(levels)
    if not levels:
        return TB(w, z, scheme)
    inner = materialize_nest(levels[1:], w, inner_scheme)
    return TB(_lift_bc(levels[0]) + inner, z, scheme)


def oracle_quadrature(f, kernel: Callable, z, resolution: int = 512, refine: int = 16, halo: int = 2):
    """
    Brute-force midpoint rule for ``iint_D kernel(z - zeta) f(zeta) dA``.

    The base rule has ``resolution`` radial by ``4 * resolution`` angular
    cells.  The cells within ``halo`` radial steps (and a comparable arc
    length in angle) of the one containing ``z`` are
    re-integrated with a ``refine`` x ``refine`` sub-midpoint rule, and only
    the sub-cell containing ``z`` is skipped.  Skipping a whole base cell
    would leave an error of the order of the cell width.  Intended only as
    an independent check on the split quadrature.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if isinstance(f, BicomplexFunction):
        raise TypeError("oracle works on one complex component at a time")
    n_r, n_t = resolution, 4 * resolution
    dr, dt = 1.0 / n_r, 2 * np.pi / n_t
    r = (np.arange(n_r) + 0.5) * dr
    t = (np.arange(n_t) + 0.5) * dt
    pts = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    fv = f(pts) * np.repeat(r * dr * dt, n_t)
    sub = (np.arange(refine) + 0.5) / refine
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape, dtype=complex)
    for k, zk in enumerate(z):
        ir = min(int(abs(zk) / dr), n_r - 1)
        it = int(np.mod(np.angle(zk), 2 * np.pi) / dt) % n_t
        rows = np.arange(max(ir - halo, 0), min(ir + halo, n_r - 1) + 1)
        # near the origin the cells are thin slivers: widen the angular halo
        # so the refined block spans about the same arc length as radius
        ht = min(n_t // 2 - 1, max(halo, int(np.ceil(halo * dr / (r[ir] * dt)))))
        cols = np.arange(it - ht, it + ht + 1) % n_t
        mask = np.ones((n_r, n_t), dtype=bool)
        mask[np.ix_(rows, cols)] = False
        total = np.sum(kernel(zk - pts[mask.ravel()]) * fv[mask.ravel()])
        # refined block: sub-cell midpoints in (r, theta)
        rr = ((rows[:, None] + sub[None, :]) * dr).ravel()
        tt = (((it - ht + np.arange(2 * ht + 1))[:, None] + sub[None, :]) * dt).ravel()
        zeta = rr[:, None] * np.exp(1j * tt)[None, :]
        wts = np.repeat(rr * dr * dt / refine**2, tt.size).reshape(zeta.shape)
        d = zk - zeta
        # the sub-cell containing zk
        jr = np.argmin(np.abs(rr - abs(zk)))
        dth = np.angle(np.exp(1j * (tt - np.angle(zk))))
        jt = np.argmin(np.abs(dth))
        keep = np.ones(zeta.shape, dtype=bool)
        keep[jr, jt] = False
        total += np.sum(kernel(d[keep]) * f(zeta[keep]) * wts[keep])
        out[k] = total
    return out if np.ndim(np.asarray(z)) and len(out) > 1 else complex(out[0])

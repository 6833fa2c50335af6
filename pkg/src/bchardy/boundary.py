"""
Boundary values on the unit circle.

A :class:`BoundaryDistribution` is one of three concrete objects: a finite
Fourier series, an integrable density (a callable of the angle, with the
angles where it may jump), or an atomic sum synthesised into such a
density.  Bicomplex boundary objects are pairs of complex ones in
idempotent coordinates.

Limits ``r -> 1`` are taken by Neville-Richardson extrapolation in
``h = 1 - r`` over radii ``1 - 2^-k``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bicomplex import Bicomplex, bnorm
from .functions import BicomplexFunction, DiskFunction, _lift_bc
from .hardy import MembershipReport, circle_integral

__all__ = [
    "BoundaryDistribution",
    "PairingResult",
    "CoefficientResult",
    "default_radii",
    "richardson",
    "distributional_pairing",
    "boundary_coefficients",
    "boundary_from_function",
    "poisson_kernel",
    "poisson_extend",
    "poisson_reproduction_check",
    "lp_boundary_convergence",
    "lone_distbv_check",
    "write_convergence_csv",
]

TWO_PI = 2 * np.pi


def default_radii(bandwidth: int = 0) -> Tuple[float, ...]:
    """
    Seven radii ``1 - 2^-k`` for the limit ``r -> 1``.

    With ``bandwidth`` 8 or less this is ``k = 3..9``.  Pairing against
    ``e^{i n theta}`` behaves like ``r^|n|``, which polynomial extrapolation
    only captures once ``|n| (1 - r)`` is small, so the window moves outward
    by one step per doubling of the bandwidth beyond 8.
    """
    shift = max(0, math.ceil(math.log2(max(bandwidth, 1) / 8.0)))
    return tuple(1 - 2.0 ** -k for k in range(3 + shift, 10 + shift))


def richardson(h: Sequence[float], values: Sequence) -> Tuple[complex, float]:
    """
    Extrapolate ``values(h)`` to ``h = 0`` with a Neville table.

    Returns the final diagonal entry and the distance between the last two
    diagonal entries as the error estimate.
    """
    h = np.asarray(h, dtype=float)
    vals = np.asarray(values)
    n = len(h)
    if n == 1:
        return vals[0], math.inf
    table = [vals.astype(complex if np.iscomplexobj(vals) else float)]
    diag = [table[0][0]]
    cur = table[0]
    for j in range(1, n):
        nxt = np.empty(n - j, dtype=cur.dtype)
        for i in range(n - j):
            # entry interpolating nodes i..i+j, evaluated at 0
            nxt[i] = (h[i + j] * cur[i] - h[i] * cur[i + 1]) / (h[i + j] - h[i])
        cur = nxt
        diag.append(cur[0])
    return diag[-1], float(np.max(np.abs(diag[-1] - diag[-2])))


# ----------------------------------------------------------------------
# boundary objects
# ----------------------------------------------------------------------
def _gl_panels(breaks, panel_width, order=16):
    """Composite Gauss-Legendre nodes on [breaks[0], breaks[-1]] respecting breaks."""
    t, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        m = max(1, int(math.ceil((b - a) / panel_width)))
        edges = np.linspace(a, b, m + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            nodes.append((hi - lo) / 2 * t + (hi + lo) / 2)
            weights.append((hi - lo) / 2 * w)
    return np.concatenate(nodes), np.concatenate(weights)


@dataclass(frozen=True, eq=False)
class BoundaryDistribution:
    """
    A boundary object on the circle.

    Build one with :meth:`trig`, :meth:`from_density`, :meth:`constant`
    or :meth:`bicomplex`.  Angles are in radians; densities take arrays of
    angles in ``[0, 2 pi)`` and may jump only at ``breakpoints``.
    """

    kind: str
    codomain: str = "complex"
    coeffs: Optional[Dict[int, complex]] = None
    density: Optional[Callable] = None
    breakpoints: Tuple[float, ...] = ()
    parts: Optional[Tuple["BoundaryDistribution", "BoundaryDistribution"]] = None
    source: object = None
    name: str = "b"

    # -- constructors --------------------------------------------------
    @classmethod
    def trig(cls, coeffs: Dict[int, complex], name: str = "trig") -> "BoundaryDistribution":
        clean = {int(n): complex(c) for n, c in coeffs.items() if c != 0}
        return cls("trig", coeffs=clean, name=name)

    @classmethod
    def from_density(cls, density: Callable, breakpoints: Sequence[float] = (),
                     name: str = "density", source=None, kind: str = "density") -> "BoundaryDistribution":
        brk = tuple(sorted(float(np.mod(b, TWO_PI)) for b in breakpoints))
        return cls(kind, density=density, breakpoints=brk, name=name, source=source)

    @classmethod
    def constant(cls, c) -> "BoundaryDistribution":
        if isinstance(c, Bicomplex):
            return cls.bicomplex(cls.trig({0: c.plus}), cls.trig({0: c.minus}))
        return cls.trig({0: c}, name=f"const {c}")

    @classmethod
    def bicomplex(cls, plus: "BoundaryDistribution", minus: "BoundaryDistribution",
                  name: str = "bc") -> "BoundaryDistribution":
        if plus.codomain != "complex" or minus.codomain != "complex":
            raise TypeError("components must be complex boundary objects")
        kind = plus.kind if plus.kind == minus.kind else "density"
        return cls(kind, codomain="bicomplex", parts=(plus, minus), name=name)

    @classmethod
    def zero(cls) -> "BoundaryDistribution":
        return cls.trig({}, name="0")

    # -- views ---------------------------------------------------------
    @property
    def plus(self):
        self._need_bc()
        return self.parts[0]

    @property
    def minus(self):
        self._need_bc()
        return self.parts[1]

    def _need_bc(self):
        if self.codomain != "bicomplex":
            raise TypeError("complex boundary object has no idempotent components")

    def values(self, theta):
        """Point values (complex array, or :class:`Bicomplex` for 𝔹-valued objects)."""
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        if self.codomain == "bicomplex":
            return Bicomplex.from_pair(self.parts[0].values(theta), self.parts[1].values(theta))
        if self.kind == "trig":
            out = np.zeros(theta.shape, dtype=complex)
            for n, c in self.coeffs.items():
                out += c * np.exp(1j * n * theta)
            return out
        return np.asarray(self.density(theta), dtype=complex) * np.ones(theta.shape)

    __call__ = values

    def conj(self) -> "BoundaryDistribution":
        """Complex conjugate (componentwise for 𝔹-valued objects)."""
        if self.codomain == "bicomplex":
            return BoundaryDistribution.bicomplex(self.parts[0].conj(), self.parts[1].conj())
        if self.kind == "trig":
            return BoundaryDistribution.trig({-n: np.conj(c) for n, c in self.coeffs.items()})
        d = self.density
        return BoundaryDistribution.from_density(lambda t: np.conj(d(t)), self.breakpoints,
                                                 name=f"conj {self.name}")

    def quadrature(self, panel_width: float = TWO_PI / 64, extra_breaks: Sequence[float] = ()):
        """Nodes/weights on [0, 2 pi) that respect every breakpoint."""
        brk = set(self.breakpoints)
        if self.codomain == "bicomplex":
            brk |= set(self.parts[0].breakpoints) | set(self.parts[1].breakpoints)
        brk |= {float(np.mod(b, TWO_PI)) for b in extra_breaks}
        brk = sorted({0.0, TWO_PI} | brk)
        return _gl_panels(brk, panel_width)

    def pair(self, phi):
        """
        ``int_0^{2pi} b(theta) phi(theta) d theta``.

        ``phi`` is an integer ``n`` (meaning ``e^{i n theta}``) or a callable
        of the angle.  Trig objects paired with an exponential are exact.
        """
        if self.codomain == "bicomplex":
            return Bicomplex.from_pair(self.parts[0].pair(phi), self.parts[1].pair(phi))
        if self.kind == "trig" and isinstance(phi, (int, np.integer)):
            return TWO_PI * self.coeffs.get(-int(phi), 0.0)
        phi_f = _as_test(phi)
        if self.kind == "trig":
            m = 4096
            th = TWO_PI * np.arange(m) / m
            return complex(np.sum(self.values(th) * phi_f(th)) * TWO_PI / m)
        x, w = self.quadrature()
        return complex(np.sum(self.values(x) * phi_f(x) * w))

    def fourier_coefficient(self, n: int):
        """``(1/2pi) int b(theta) e^{-i n theta} d theta``."""
        v = self.pair(-int(n))
        return v / TWO_PI

    def lp_norm(self, p: float) -> float:
        """``(int |b|^p d theta)^(1/p)``; bicomplex norm for 𝔹-valued objects."""
        x, w = self.quadrature()
        v = self.values(x)
        mag = np.asarray(bnorm(v)) if isinstance(v, Bicomplex) else np.abs(v)
        return float(np.sum(w * mag**p) ** (1.0 / p))

    def __add__(self, other: "BoundaryDistribution") -> "BoundaryDistribution":
        if self.codomain != other.codomain:
            raise TypeError("cannot add complex and bicomplex boundary objects")
        if self.codomain == "bicomplex":
            return BoundaryDistribution.bicomplex(self.parts[0] + other.parts[0],
                                                  self.parts[1] + other.parts[1])
        if self.kind == "trig" and other.kind == "trig":
            c = dict(self.coeffs)
            for n, v in other.coeffs.items():
                c[n] = c.get(n, 0) + v
            return BoundaryDistribution.trig(c)
        a, b = self, other
        return BoundaryDistribution.from_density(
            lambda t: a.values(t) + b.values(t), a.breakpoints + b.breakpoints,
            name=f"{a.name} + {b.name}")


def _as_test(phi):
    if isinstance(phi, (int, np.integer)):
        n = int(phi)
        return lambda t: np.exp(1j * n * np.asarray(t))
    return phi


# ----------------------------------------------------------------------
# pairings and coefficients
# ----------------------------------------------------------------------
@dataclass
class PairingResult:
    value: object  # complex or Bicomplex
    radii_used: List[float]
    extrapolation_error: float
    converged: bool
    iterates: List = field(default_factory=list)


def _circle_pairing(f: DiskFunction, phi_f, r: float, rtol=1e-12, n_max=2**20):
    """Adaptive trapezoid for ``int f(r e^{it}) phi(t) dt`` (complex)."""
    n = 64
    th = TWO_PI * np.arange(n) / n
    s = complex(np.sum(f(r * np.exp(1j * th)) * phi_f(th)))
    prev = s * TWO_PI / n
    while n < n_max:
        th = TWO_PI * (np.arange(n) + 0.5) / n
        s += complex(np.sum(f(r * np.exp(1j * th)) * phi_f(th)))
        n *= 2
        cur = s * TWO_PI / n
        if abs(cur - prev) <= rtol * max(abs(cur), 1.0):
            return cur
        prev = cur
    return prev


def distributional_pairing(f, phi, radii: Sequence[float] | None = None,
                           tol: float = 1e-6) -> PairingResult:
    """
    ``lim_{r->1} int_0^{2pi} f(r e^{i theta}) phi(theta) d theta``.

    ``phi`` is an integer ``n`` (for ``e^{i n theta}``) or a smooth callable
    of the angle.  The circle integrals are extrapolated to ``r = 1``; the
    result is flagged non-converged (and carries the last iterate) when the
    extrapolation error exceeds ``tol * max(1, |value|)``.
    """
    if radii is None:
        radii = default_radii(abs(int(phi)) if isinstance(phi, (int, np.integer)) else 0)
    radii = sorted(float(r) for r in radii)
    if isinstance(f, BicomplexFunction):
        a = distributional_pairing(f.plus, phi, radii, tol)
        b = distributional_pairing(f.minus, phi, radii, tol)
        iters = [Bicomplex.from_pair(x, y) for x, y in zip(a.iterates, b.iterates)]
        return PairingResult(Bicomplex.from_pair(a.value, b.value), radii,
                             max(a.extrapolation_error, b.extrapolation_error),
                             a.converged and b.converged, iters)
    phi_f = _as_test(phi)
    vals = [_circle_pairing(f, phi_f, r) for r in radii]
    h = [1 - r for r in radii]
    value, err = richardson(h, vals)
    converged = bool(np.isfinite(err) and err <= tol * max(1.0, abs(value)))
    if not converged:
        value = vals[-1]
    return PairingResult(complex(value), radii, err, converged, vals)


@dataclass
class CoefficientResult:
    """Extrapolated Fourier coefficients ``c_n``, ``|n| <= N``."""

    coeffs: Dict[int, complex]
    errors: Dict[int, float]
    radii_used: List[float]

    @property
    def max_error(self) -> float:
        return max(self.errors.values()) if self.errors else 0.0


def _circle_fft(f, r, N, rtol=1e-12, m_max=2**22):
    """Fourier coefficients of ``f(r e^{it})`` for |n| <= N, adaptively sampled."""
    m = max(64, 1 << int(math.ceil(math.log2(4 * N + 4))))
    prev = None
    while True:
        th = TWO_PI * np.arange(m) / m
        c = np.fft.fft(f(r * np.exp(1j * th))) / m
        cur = np.concatenate([c[-N:], c[: N + 1]]) if N else c[:1]
        if prev is not None:
            scale = max(1.0, float(np.max(np.abs(cur))))
            if np.max(np.abs(cur - prev)) <= rtol * scale or m >= m_max:
                return cur
        prev = cur
        m *= 2


def boundary_coefficients(f: DiskFunction, N: int = 64, radii: Sequence[float] | None = None) -> CoefficientResult:
    """
    ``c_n = (1/2pi) lim_{r->1} int f(r e^{it}) e^{-int} dt`` for ``|n| <= N``.

    This is the distributional pairing against the Fourier basis, done for
    all ``n`` at once with one FFT per radius.
    """
    if radii is None:
        radii = default_radii(N)
    radii = sorted(radii)
    rows = np.array([_circle_fft(f, r, N) for r in radii])
    h = [1 - r for r in radii]
    coeffs, errors = {}, {}
    ns = range(-N, N + 1)
    for k, n in enumerate(ns):
        v, e = richardson(h, rows[:, k])
        coeffs[n] = complex(v)
        errors[n] = float(e)
    return CoefficientResult(coeffs, errors, list(radii))


def boundary_from_function(f, N: int = 64, radii=None) -> BoundaryDistribution:
    """Trig-coefficient boundary object of ``f`` truncated at ``|n| <= N``."""
    if isinstance(f, BicomplexFunction):
        return BoundaryDistribution.bicomplex(boundary_from_function(f.plus, N, radii),
                                              boundary_from_function(f.minus, N, radii))
    res = boundary_coefficients(f, N, radii)
    return BoundaryDistribution.trig(res.coeffs, name=f"b({getattr(f, 'name', 'f')}, N={N})")


# ----------------------------------------------------------------------
# Poisson
# ----------------------------------------------------------------------
def poisson_kernel(r, theta):
    """``P_r(theta) = (1 - r^2) / (1 - 2 r cos theta + r^2)``."""
    r = np.asarray(r, dtype=float)
    return (1 - r**2) / (1 - 2 * r * np.cos(theta) + r**2)


def poisson_extend(b: BoundaryDistribution, r, theta):
    """
    ``(1/2pi) <b, P_r(theta - .)>`` for ``0 <= r < 1``.

    Trig objects use the multiplier ``r^|n|`` exactly; densities are
    integrated with panels no wider than ``2(1 - r)`` so the kernel peak is
    resolved.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr >= 1) or np.any(r_arr < 0):
        raise ValueError("Poisson extension needs 0 <= r < 1")
    if b.codomain == "bicomplex":
        return Bicomplex.from_pair(poisson_extend(b.parts[0], r, theta),
                                   poisson_extend(b.parts[1], r, theta))
    r_arr, th = np.broadcast_arrays(r_arr, np.asarray(theta, dtype=float))
    if b.kind == "trig":
        out = np.zeros(r_arr.shape, dtype=complex)
        for n, c in b.coeffs.items():
            out += c * r_arr ** abs(n) * np.exp(1j * n * th)
        return out if out.ndim else complex(out)
    out = np.empty(r_arr.shape, dtype=complex)
    for idx in np.ndindex(r_arr.shape):
        rr, tt = float(r_arr[idx]), float(th[idx])
        width = min(TWO_PI / 64, 2 * (1 - rr))
        x, w = b.quadrature(width, extra_breaks=(tt,))
        out[idx] = np.sum(b.values(x) * poisson_kernel(rr, tt - x) * w) / TWO_PI
    return out if out.ndim else complex(out)


def poisson_reproduction_check(f, b: BoundaryDistribution, sample_points) -> float:
    """Max over ``sample_points`` of ``|f - P[b]|`` (bicomplex norm for 𝔹-valued f)."""
    z = np.asarray(sample_points, dtype=complex)
    ext = poisson_extend(b, np.abs(z), np.angle(z))
    if isinstance(f, BicomplexFunction) or b.codomain == "bicomplex":
        f = _lift_bc(f)
        diff = f(z) - ext
        return float(np.max(bnorm(diff))) if z.size else 0.0
    return float(np.max(np.abs(f(z) - ext))) if z.size else 0.0


# ----------------------------------------------------------------------
# L^p convergence to the boundary
# ----------------------------------------------------------------------
def lp_boundary_convergence(f, f_boundary: BoundaryDistribution, p: float,
                            radii: Sequence[float] = (0.9, 0.99, 0.999),
                            rtol: float = 1e-8) -> List[Tuple[float, float]]:
    """
    ``int_0^{2pi} |f(r e^{it}) - f_b(t)|^p dt`` per radius (bicomplex norm
    for 𝔹-valued inputs).  ``f_boundary`` must be a density or trig object.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    bc = isinstance(f, BicomplexFunction) or f_boundary.codomain == "bicomplex"
    if bc:
        f = _lift_bc(f)

    def integrand(z):
        t = np.angle(z)
        if bc:
            d = f(z) - f_boundary.values(t)
            return np.asarray(bnorm(d)) ** p
        return np.abs(f(z) - f_boundary.values(t)) ** p

    out = []
    for r in sorted(radii):
        val, _ = circle_integral(integrand, r, rtol=rtol, n_min=64)
        out.append((float(r), float(val)))
    return out


def _restriction(f) -> BoundaryDistribution:
    """``f`` restricted to the unit circle (needs ``f`` evaluable at |z| = 1)."""
    if isinstance(f, BicomplexFunction):
        return BoundaryDistribution.bicomplex(_restriction(f.plus), _restriction(f.minus))
    return BoundaryDistribution.from_density(lambda t: f(np.exp(1j * t)),
                                             name=f"{getattr(f, 'name', 'f')}|dD")


def lone_distbv_check(f, N: int = 8, radii_l1=(0.9, 0.99, 0.999), atol: float = 1e-6) -> MembershipReport:
    """
    Check that the distributional boundary value of ``f`` equals its
    restriction to the circle, basis-verified up to ``N``.

    Prerequisite: ``f`` extends to the closed disk and the L¹ circle errors
    at ``radii_l1`` decrease strictly; otherwise the verdict is
    inconclusive.  Each coefficient passes when the pairing and the direct
    boundary integral differ by at most ``max(10 * extrapolation error, atol)``.
    """
    f = _lift_bc(f)
    report = MembershipReport(f"distributional boundary value (basis-verified up to N={N})",
                              "inconclusive")
    if not f.closed:
        report.notes.append("function not evaluable on the closed disk")
        return report
    restr = _restriction(f)
    errs = lp_boundary_convergence(f, restr, 1.0, radii_l1)
    for r, e in errs:
        report.residuals[f"L1_error_r={r:g}"] = e
    decreasing = all(b[1] < a[1] for a, b in zip(errs[:-1], errs[1:])) or all(e == 0 for _, e in errs)
    if not decreasing:
        report.notes.append("L1 boundary convergence not observed")
        return report
    cp = boundary_coefficients(f.plus, N)
    cm = boundary_coefficients(f.minus, N)
    worst = 0.0
    ok = True
    for n in range(-N, N + 1):
        for comp, res, name in ((restr.plus, cp, "+"), (restr.minus, cm, "-")):
            direct = comp.fourier_coefficient(n)
            diff = abs(res.coeffs[n] - direct)
            thr = max(10 * res.errors[n], atol)
            worst = max(worst, diff)
            if not diff <= thr:
                ok = False
                report.residuals[f"coef{name}[{n}]"] = diff
                report.thresholds[f"coef{name}[{n}]"] = thr
    report.residuals["max_coefficient_gap"] = worst
    report.verdict = "pass" if ok else "fail"
    return report


def write_convergence_csv(rows: Sequence[Tuple[float, float]], path, extrapolant=None) -> None:
    """CSV with columns ``r, error_p, extrapolant`` (17 significant digits)."""
    rows = list(rows)
    if extrapolant is None and len(rows) >= 2:
        extrapolant, _ = richardson([1 - r for r, _ in rows], [e for _, e in rows])
        extrapolant = float(np.real(extrapolant))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "error_p", "extrapolant"])
        for r, e in rows:
            w.writerow([f"{r:.17g}", f"{e:.17g}", f"{extrapolant:.17g}" if extrapolant is not None else ""])

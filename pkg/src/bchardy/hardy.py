"""
Hardy norms, growth exponents and desk-scale membership classification.

The supremum over ``0 < r < 1`` in the Hardy norm cannot be computed, so a
norm is *estimated* from a scan over a finite set of radii.  A scan counts
as finite when the two outermost circle integrals agree to 1% or stay below
1e6; reports say which of the two applied.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .bicomplex import bnorm
from .functions import (
    BicomplexFunction,
    DiskFunction,
    Sampled,
    _lift_bc,
    bc_partialbar,
    bc_partialbar_at,
    wirtinger_at,
    wirtinger_dzbar,
)
from .grid import PolarGrid

__all__ = [
    "DEFAULT_RADII",
    "GROWTH_RADII",
    "HardyNormEstimate",
    "MembershipReport",
    "CLASS_NAMES",
    "circle_integral",
    "hp_norm",
    "bc_hp_norm",
    "growth_exponent",
    "disk_lp_norm",
    "classify",
]

DEFAULT_RADII = (0.5, 0.75, 0.9, 0.95, 0.99, 0.995)
GROWTH_RADII = tuple(1 - 2.0**-k for k in range(2, 11))

#: relative change between the two outermost circle integrals below which a scan counts as settled
SETTLE_RTOL = 0.01
#: circle integrals above this are treated as divergent
DIVERGENCE_BOUND = 1e6


def circle_integral(g, r: float, rtol: float = 1e-10, n_min: int = 64, n_max: int = 2**18):
    """
    ``int_0^{2pi} g(r e^{i theta}) d theta`` by the trapezoid rule.

    ``g`` maps points to nonnegative reals.  The node count is doubled
    (reusing old nodes) until two successive sums agree to ``rtol``; the
    rule converges geometrically for functions analytic near the circle,
    and the doubling resolves peaks of width ``1 - r`` near boundary
    singularities.  Returns ``(value, n_nodes)``.
    """
    n = n_min
    th = 2 * np.pi * np.arange(n) / n
    s = float(np.sum(g(r * np.exp(1j * th))))
    prev = s * 2 * np.pi / n
    while n < n_max:
        th = 2 * np.pi * (np.arange(n) + 0.5) / n
        s += float(np.sum(g(r * np.exp(1j * th))))
        n *= 2
        cur = s * 2 * np.pi / n
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur, n
        prev = cur
    return prev, n


@dataclass
class HardyNormEstimate:
    """
    Result of a radial scan.

    ``values_by_radius`` holds ``(r, I(r)^(1/p))`` where ``I(r)`` is the
    circle integral of ``|f|^p``; ``integrals`` holds ``I(r)`` itself.
    ``converged`` means the two outermost integrals differ by less than 1%
    relatively (a threshold of this library, not of the theory).
    """

    p: float
    values_by_radius: List[Tuple[float, float]]
    integrals: List[Tuple[float, float]]
    sup_estimate: float
    converged: bool

    @property
    def status(self) -> str:
        """
        ``finite`` when the scan settled (``converged``) or the outermost
        circle integral stays at or below 1e6; ``divergent`` above that.

        The bound is deliberately permissive: at desk scale a slowly
        growing scan (``z^n`` near r = 1, or a logarithmic blow-up) cannot
        be told apart, so ``finite`` means "not observed to diverge".
        """
        if self.converged:
            return "finite"
        if not self.integrals:
            return "inconclusive"
        last = self.integrals[-1][1]
        if last <= DIVERGENCE_BOUND:
            return "finite"
        if math.isfinite(last):
            return "divergent"
        return "inconclusive"

    @property
    def settled(self) -> bool:
        return self.converged

    @property
    def relative_change(self) -> float:
        if len(self.integrals) < 2:
            return math.nan
        a, b = self.integrals[-2][1], self.integrals[-1][1]
        if a == b:
            return 0.0
        return abs(b - a) / max(abs(a), 1e-300)

    def to_dict(self):
        return {
            "p": self.p,
            "values_by_radius": [list(v) for v in self.values_by_radius],
            "integrals": [list(v) for v in self.integrals],
            "relative_change": self.relative_change,
            "sup_estimate": self.sup_estimate,
            "converged": self.converged,
            "status": self.status,
        }


def _scan(integrand, p, radii):
    radii = sorted(float(r) for r in radii)
    if not radii or radii[0] <= 0 or radii[-1] >= 1:
        raise ValueError("radii must lie in (0, 1)")
    integrals = []
    for r in radii:
        val, _ = circle_integral(integrand, r)
        if not math.isfinite(val):
            raise FloatingPointError(f"circle integral not finite at r = {r}")
        integrals.append((r, val))
    values = [(r, v ** (1.0 / p)) for r, v in integrals]
    sup = max(v for _, v in values)
    if len(integrals) >= 2:
        a, b = integrals[-2][1], integrals[-1][1]
        converged = a == b or abs(b - a) < SETTLE_RTOL * abs(a)
    else:
        converged = False
    return HardyNormEstimate(float(p), values, integrals, sup, converged)


def hp_norm(f: DiskFunction, p: float, radii: Sequence[float] = DEFAULT_RADII) -> HardyNormEstimate:
    """Radial scan of ``(int |f(re^{it})|^p dt)^(1/p)``."""
    if p <= 0:
        raise ValueError("p must be positive")
    if isinstance(f, BicomplexFunction):
        raise TypeError("use bc_hp_norm for bicomplex functions")
    return _scan(lambda z: np.abs(f(z)) ** p, p, radii)


def bc_hp_norm(f, p: float, radii: Sequence[float] = DEFAULT_RADII) -> HardyNormEstimate:
    """Same scan with the bicomplex norm as integrand."""
    if p <= 0:
        raise ValueError("p must be positive")
    f = _lift_bc(f)

    def integrand(z):
        a, b = f.plus(z), f.minus(z)
        return ((np.abs(a) ** 2 + np.abs(b) ** 2) / 2) ** (p / 2)

    return _scan(integrand, p, radii)


def growth_exponent(f, radii: Sequence[float] = GROWTH_RADII, n_fit: int = 6) -> float:
    """
    Least-squares slope of ``log max_theta |f(re^{i theta})|`` against
    ``-log(1 - r)`` over the outermost ``n_fit`` radii, clamped at 0.

    Bicomplex inputs use the bicomplex norm.  A non-finite fit is returned
    as ``nan`` rather than raised.
    """
    radii = sorted(radii)[-n_fit:]
    if isinstance(f, BicomplexFunction):
        mag = lambda z: np.asarray(bnorm(f(z)))
    else:
        mag = lambda z: np.abs(f(z))
    xs, ys = [], []
    for r in radii:
        n = max(512, 1 << int(math.ceil(math.log2(64.0 / (1 - r)))))
        th = 2 * np.pi * np.arange(n) / n
        with np.errstate(all="ignore"):
            m = float(np.max(mag(r * np.exp(1j * th))))
        xs.append(-math.log(1 - r))
        ys.append(math.log(m) if m > 0 else -np.inf)
    ys = np.asarray(ys)
    if not np.all(np.isfinite(ys)):
        if np.all(ys == -np.inf):
            return 0.0  # identically zero
        return math.nan
    slope = np.polyfit(np.asarray(xs), ys, 1)[0]
    return float(max(slope, 0.0))


def disk_lp_norm(f, m: float, grid: PolarGrid | None = None) -> float:
    """``(iint_D |f|^m dA)^(1/m)`` on a polar grid (bicomplex norm for 𝔹-valued ``f``)."""
    grid = grid or PolarGrid(128, 512)
    if isinstance(f, BicomplexFunction):
        vals = np.asarray(bnorm(f(grid.points)))
    else:
        vals = np.abs(f(grid.points))
    return float(np.sum(grid.weights * vals**m) ** (1.0 / m))


# ----------------------------------------------------------------------
# membership
# ----------------------------------------------------------------------
CLASS_NAMES = ("H^p", "H^p_f", "H^p(D,B)", "H^p_w(D,B)", "H^{n,p}_w(D,B)")

#: absolute floor for derivative-residual thresholds
RESIDUAL_ATOL = 1e-6


@dataclass
class MembershipReport:
    class_name: str
    verdict: str
    residuals: Dict[str, float] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "class": self.class_name,
            "verdict": self.verdict,
            "residuals": dict(self.residuals),
            "thresholds": dict(self.thresholds),
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _check_points(r_max=0.9):
    rings = np.array([0.15, 0.4, 0.65, r_max - 0.05])
    ang = 2 * np.pi * (np.arange(8) + 0.25) / 8
    return (rings[:, None] * np.exp(1j * ang)[None, :]).ravel()


def _complex_dzbar_residual(f: DiskFunction, target=None, pts=None):
    """max |df/dz* - target| at interior points, with an error estimate."""
    pts = _check_points() if pts is None else pts
    closed = f.dzbar()
    if closed is not None:
        d, est = closed(pts), 0.0
    elif isinstance(f, Sampled):
        rep = wirtinger_dzbar(f)
        d = rep.values(pts)
        est = rep.est_error
    else:
        d, est = wirtinger_at(f, pts, "dzbar")
    t = 0.0 if target is None else target(pts)
    return float(np.max(np.abs(d - t))), est


def _bc_dbar_values(f: BicomplexFunction, pts, k: int = 1):
    """(dbar^k f)(pts) as (plus, minus) arrays, plus accumulated error estimate."""
    g, est = f, 0.0
    for _ in range(k - 1):
        rep = bc_partialbar(g)
        g, est = rep.values, est + rep.est_error
    closed_p, closed_m = g.plus.dz(), g.minus.dzbar()
    if closed_p is not None and closed_m is not None:
        return closed_p(pts), closed_m(pts), est
    if isinstance(g.plus, Sampled) or isinstance(g.minus, Sampled):
        rep = bc_partialbar(g)
        return rep.values.plus(pts), rep.values.minus(pts), est + rep.est_error
    val, e = bc_partialbar_at(g, pts)
    return val.plus, val.minus, est + e


def _bc_residual(f, target, k=1):
    pts = _check_points()
    a, b, est = _bc_dbar_values(f, pts, k)
    if target is not None:
        target = _lift_bc(target)
        a = a - target.plus(pts)
        b = b - target.minus(pts)
    res = float(np.max(np.sqrt((np.abs(a) ** 2 + np.abs(b) ** 2) / 2)))
    return res, est


def _scan_verdict(est: HardyNormEstimate, report: MembershipReport, key: str):
    report.residuals[f"{key}_rel_change"] = est.relative_change
    report.thresholds[f"{key}_rel_change"] = SETTLE_RTOL
    report.residuals[f"{key}_outer_integral"] = est.integrals[-1][1]
    report.notes.append(f"{key}: {'settled' if est.converged else 'bounded, not settled'}")
    report.thresholds[f"{key}_outer_integral"] = DIVERGENCE_BOUND
    return est.status


def classify(f, class_name: str, p: float = 2.0, source=None, n: int = 1,
             radii: Sequence[float] = DEFAULT_RADII, atol: float = RESIDUAL_ATOL) -> MembershipReport:
    """
    Desk-scale membership test.

    Each class combines (a) a differential-equation residual at interior
    points and (b) radial norm scans.  A residual passes when it is at most
    ``max(10 * est_error, atol)``.  The verdict is ``pass`` when every
    residual passes and every scan is finite, ``fail`` when a residual
    fails or a scan diverges, and ``inconclusive`` otherwise.

    ``source`` is the right-hand side (``f`` in H^p_f, ``w`` in the
    bicomplex classes); ``n`` the order for ``H^{n,p}_w(D,B)``.
    """
    if class_name not in CLASS_NAMES:
        raise KeyError(f"unknown class {class_name!r}; known: {', '.join(CLASS_NAMES)}")
    report = MembershipReport(class_name, "inconclusive")
    statuses = []
    residual_ok = True

    def record(key, res, est):
        nonlocal residual_ok
        thr = max(10 * est, atol)
        report.residuals[key] = res
        report.thresholds[key] = thr
        if not res <= thr:
            residual_ok = False

    if class_name in ("H^p", "H^p_f"):
        if isinstance(f, BicomplexFunction):
            raise TypeError(f"{class_name} is a class of complex functions")
        target = source if class_name == "H^p_f" else None
        if class_name == "H^p_f" and source is None:
            raise ValueError("H^p_f needs a source")
        res, est = _complex_dzbar_residual(f, target)
        record("dzbar_residual", res, est)
        statuses.append(_scan_verdict(hp_norm(f, p, radii), report, "norm"))
    else:
        f = _lift_bc(f)
        if class_name == "H^p(D,B)":
            res, est = _bc_residual(f, None)
            record("dbar_residual", res, est)
            statuses.append(_scan_verdict(bc_hp_norm(f, p, radii), report, "norm"))
        elif class_name == "H^p_w(D,B)":
            if source is None:
                raise ValueError("H^p_w(D,B) needs a source w")
            res, est = _bc_residual(f, source)
            record("dbar_residual", res, est)
            statuses.append(_scan_verdict(bc_hp_norm(f, p, radii), report, "norm"))
        else:
            if source is None or n < 1:
                raise ValueError("H^{n,p}_w(D,B) needs a source w and n >= 1")
            res, est = _bc_residual(f, source, k=n)
            record(f"dbar^{n}_residual", res, est)
            g = f
            for k in range(n):
                statuses.append(_scan_verdict(bc_hp_norm(g, p, radii), report, f"dbar^{k}_norm"))
                if k < n - 1:
                    g = bc_partialbar(g).values
    if not residual_ok or "divergent" in statuses:
        report.verdict = "fail"
    elif all(s == "finite" for s in statuses):
        report.verdict = "pass"
    else:
        report.verdict = "inconclusive"
    report.notes.append("norm scans settle at 1% relative change of the outermost circle integrals")
    return report

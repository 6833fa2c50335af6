"""
Representation of solutions of (higher-order) d-bar equations.

First order: a solution of ``dbar f = w`` splits as ``f = phi + TB(w)`` with
``phi`` bicomplex-holomorphic.  Order ``n``: ``f = Phi_0 + Psi`` with
``Psi = TB(Phi_1 + TB(Phi_2 + ... + TB(Phi_{n-1} + TB(w))))`` and every
``Phi_k`` holomorphic.

Numerical objects here are *materialised*: operator outputs are stored on
the grid of a coarse :class:`~bchardy.integral_ops.QuadratureScheme` and
reused.  Each composition level carries a tolerance that doubles per level.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .atoms import AtomicDecomposition, BCAtomicBoundary
from .bicomplex import Bicomplex, bnorm
from .boundary import BoundaryDistribution, boundary_coefficients, poisson_extend
from .functions import (
    BicomplexFunction,
    DiskFunction,
    Sampled,
    _lift_bc,
    bc_partialbar,
    bc_partialbar_power,
    sample,
    write_csv,
)
from .hardy import _bc_residual
from .integral_ops import (
    K01,
    K10,
    KernelId,
    QuadratureScheme,
    TB,
    TB_function,
    T_function,
    convolve_kernel,
    materialize_TB,
)

__all__ = [
    "BASE_TOL",
    "level_tolerance",
    "FirstOrderRep",
    "HigherOrderRep",
    "holomorphicity_gate",
    "recover_holomorphic",
    "build_solution",
    "higher_order_peel",
    "build_higher",
    "kernel_form_check",
    "atomic_boundary_of_solution",
    "save_bundle",
]

#: tolerance of one quadrature level on the coarse materialisation grid
BASE_TOL = 1e-3
#: absolute floor for the holomorphicity gate
GATE_ATOL = 1e-6


def level_tolerance(levels: int) -> float:
    """Error budget after ``levels`` stacked operator applications (doubles per level)."""
    return BASE_TOL * 2.0 ** max(levels - 1, 0)


def _on_grid(f, grid) -> BicomplexFunction:
    f = _lift_bc(f)
    return BicomplexFunction(sample(f.plus, grid), sample(f.minus, grid), name=f.name)


def _sampled_bc(plus_vals, minus_vals, grid, name) -> BicomplexFunction:
    return BicomplexFunction(Sampled(grid, plus_vals, name=f"{name}+"),
                             Sampled(grid, minus_vals, name=f"{name}-"), name=name)


def holomorphicity_gate(phi, r_interior: float = 0.9) -> Dict[str, float]:
    """
    Interior ``|dbar phi|`` against ``max(10 * est_error, GATE_ATOL)``.

    Returns ``{"residual", "est_error", "threshold", "passed"}``.
    """
    phi = _lift_bc(phi)
    if isinstance(phi.plus, Sampled) and isinstance(phi.minus, Sampled):
        rep = bc_partialbar(phi, r_interior=r_interior)
        grid = phi.plus.grid
        mask = grid.interior_mask(r_interior)
        vals = rep.values
        res = float(np.max(np.sqrt((np.abs(vals.plus.values[mask]) ** 2
                                    + np.abs(vals.minus.values[mask]) ** 2) / 2)))
        est = rep.est_error
    else:
        res, est = _bc_residual(phi, None)
    thr = max(10 * est, GATE_ATOL)
    return {"residual": res, "est_error": est, "threshold": thr, "passed": float(res <= thr)}


@dataclass
class FirstOrderRep:
    phi: BicomplexFunction
    source: BicomplexFunction
    correction: BicomplexFunction
    residuals: Dict[str, float] = field(default_factory=dict)
    tolerance: float = BASE_TOL

    @property
    def grid(self):
        return self.phi.plus.grid


@dataclass
class HigherOrderRep:
    n: int
    Phi: List[BicomplexFunction]
    source: BicomplexFunction
    Psi: BicomplexFunction
    residuals: Dict[str, float] = field(default_factory=dict)
    tolerances: List[float] = field(default_factory=list)

    @property
    def grid(self):
        return self.Psi.plus.grid


def _check_equation(f, w, k, atol):
    res, est = _bc_residual(f, w, k=k)
    thr = max(10 * est, atol)
    if not res <= thr:
        raise ValueError(
            f"d-bar^{k} f = w is violated: residual {res:.3g} above {thr:.3g}")
    return res


def recover_holomorphic(f, w, scheme: Optional[QuadratureScheme] = None,
                        atol: float = 1e-6) -> FirstOrderRep:
    """
    ``phi = f - TB(w)`` on the grid of ``scheme`` (coarse by default).

    The input equation ``dbar f = w`` is checked first and the input is
    rejected when its residual is too large.
    """
    f, w = _lift_bc(f), _lift_bc(w)
    scheme = scheme or QuadratureScheme.coarse()
    eq = _check_equation(f, w, 1, atol)
    corr = materialize_TB(w, scheme)
    pts = scheme.grid.points
    phi = _sampled_bc(f.plus(pts) - corr.plus.values, f.minus(pts) - corr.minus.values,
                      scheme.grid, name="phi")
    gate = holomorphicity_gate(phi)
    res = {"equation_residual": eq, "phi_dbar_residual": gate["residual"],
           "phi_dbar_threshold": gate["threshold"], "phi_gate_passed": gate["passed"]}
    return FirstOrderRep(phi, w, corr, res, level_tolerance(1))


def build_solution(phi, w, scheme: Optional[QuadratureScheme] = None, materialize: bool = False):
    """
    ``phi + TB(w)`` (or ``phi + T(w)`` for complex inputs).

    The operator term is evaluated lazily with ``scheme`` unless
    ``materialize`` is set, in which case it is stored on the scheme's grid.
    """
    if isinstance(phi, DiskFunction) and isinstance(w, DiskFunction):
        return phi + T_function(w, scheme)
    phi, w = _lift_bc(phi), _lift_bc(w)
    if materialize:
        return phi + materialize_TB(w, scheme or QuadratureScheme.coarse())
    return phi + TB_function(w, scheme)


def _dbar_power_values(f: BicomplexFunction, k: int, pts):
    """(dbar^k f)(pts) as a pair of arrays; symbolic for generators."""
    if k == 0:
        return f.plus(pts), f.minus(pts)
    rep = bc_partialbar_power(f, k)
    return rep.values.plus(pts), rep.values.minus(pts)


def higher_order_peel(f, w, n: int, scheme: Optional[QuadratureScheme] = None,
                      atol: float = 1e-6) -> HigherOrderRep:
    """
    Peel ``f`` with ``dbar^n f = w`` into ``Phi_0, ..., Phi_{n-1}`` and ``Psi``.

    ``Phi_{n-1} = dbar^{n-1} f - TB(w)``; then, from the inside out,
    ``Phi_k = dbar^k f - TB(Phi_{k+1} + TB(...))``.  Each nest is
    materialised once on the scheme's grid.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > 3:
        raise ValueError("peeling is limited to n <= 3")
    f, w = _lift_bc(f), _lift_bc(w)
    scheme = scheme or QuadratureScheme.coarse()
    grid = scheme.grid
    pts = grid.points
    eq = _check_equation(f, w, n, atol)
    nest = materialize_TB(w, scheme)  # TB(w)
    Phi: List[Optional[BicomplexFunction]] = [None] * n
    for k in range(n - 1, -1, -1):
        dp, dm = _dbar_power_values(f, k, pts)
        Phi[k] = _sampled_bc(dp - nest.plus.values, dm - nest.minus.values, grid, name=f"Phi_{k}")
        if k > 0:
            nest = materialize_TB(Phi[k] + nest, scheme)
    res = {"equation_residual": eq}
    for k, ph in enumerate(Phi):
        gate = holomorphicity_gate(ph)
        res[f"Phi_{k}_dbar_residual"] = gate["residual"]
        res[f"Phi_{k}_dbar_threshold"] = gate["threshold"]
        res[f"Phi_{k}_gate_passed"] = gate["passed"]
    tols = [level_tolerance(n - k) for k in range(n)]
    return HigherOrderRep(n, Phi, w, nest, res, tols)


def build_higher(Phi: Sequence, w, scheme: Optional[QuadratureScheme] = None,
                 inner_scheme: Optional[QuadratureScheme] = None) -> BicomplexFunction:
    """
    ``Phi_0 + TB(Phi_1 + TB(... + TB(w)))``.

    Inner nests are materialised on ``inner_scheme``; the outermost operator
    is kept lazy (evaluated with ``scheme``), so the result evaluates at any
    point of the closed disk.
    """
    Phi = [_lift_bc(p) for p in Phi]
    if not Phi:
        raise ValueError("need at least Phi_0")
    w = _lift_bc(w)
    inner_scheme = inner_scheme or QuadratureScheme.coarse()
    if len(Phi) == 1:
        return Phi[0] + TB_function(w, scheme)
    inner = materialize_TB(w, inner_scheme)
    for ph in reversed(Phi[2:]):
        inner = materialize_TB(ph + inner, inner_scheme)
    return Phi[0] + TB_function(Phi[1] + inner, scheme)


def kernel_form_check(rep: HigherOrderRep, sample_points, scheme: Optional[QuadratureScheme] = None) -> float:
    """
    Compare ``Phi_0 + Psi`` with the single-convolution kernel form.

    The kernel form is
    ``Phi_0 + p+ [sum_k K_{k,0} * Phi_k^+ + K_{n,0} * w^+]
    + p- [sum_k K_{0,k} * Phi_k^- + K_{0,n} * w^-]``
    with ``k = 1..n-1`` and ``*`` the area convolution.  ``Psi`` is taken
    from ``rep`` (nested operators); the kernel side is computed
    independently with :func:`convolve_kernel`.  Returns the largest
    bicomplex-norm difference.
    """
    z = np.asarray(sample_points, dtype=complex)
    scheme = scheme or QuadratureScheme()
    n = rep.n
    plus = np.zeros(z.shape, dtype=complex)
    minus = np.zeros(z.shape, dtype=complex)
    for k in range(1, n):
        plus += convolve_kernel(KernelId(k, 0), rep.Phi[k].plus, z, scheme)
        minus += convolve_kernel(KernelId(0, k), rep.Phi[k].minus, z, scheme)
    plus += convolve_kernel(KernelId(n, 0), rep.source.plus, z, scheme)
    minus += convolve_kernel(KernelId(0, n), rep.source.minus, z, scheme)
    phi0 = rep.Phi[0]
    kernel_p = phi0.plus(z) + plus
    kernel_m = phi0.minus(z) + minus
    nested_p = phi0.plus(z) + rep.Psi.plus(z)
    nested_m = phi0.minus(z) + rep.Psi.minus(z)
    diff = np.sqrt((np.abs(kernel_p - nested_p) ** 2 + np.abs(kernel_m - nested_m) ** 2) / 2)
    return float(np.max(diff)) if diff.size else 0.0


def _restriction_density(g, name):
    return BoundaryDistribution.from_density(lambda t: g(np.exp(1j * np.asarray(t))), name=name)


def atomic_boundary_of_solution(f, w, phi_plus: AtomicDecomposition, phi_minus: AtomicDecomposition,
                                phi=None, N: int = 32, q: Optional[float] = None,
                                tol: float = 1e-6, scheme: Optional[QuadratureScheme] = None) -> BCAtomicBoundary:
    """
    Assemble ``f_b = p+ (sum c+ a+)* + p- sum c- a- + TB(w)|_dD``.

    The atomic decompositions of the holomorphic part are inputs.  When
    ``phi`` is given, its boundary Fourier coefficients (up to ``N``) must
    match those of the supplied decompositions; otherwise ``ValueError``.
    A zero source ``w`` gives no tail.
    """
    w = _lift_bc(w) if w is not None else None
    tail = None
    if w is not None and not _is_zero(w):
        tb = TB_function(w, scheme)
        tail = BoundaryDistribution.bicomplex(_restriction_density(tb.plus, "TB(w)+|dD"),
                                              _restriction_density(tb.minus, "TB(w)-|dD"),
                                              name="TB(w)|dD")
    out = BCAtomicBoundary(phi_plus, phi_minus, tail, q)
    if phi is not None:
        phi = _lift_bc(phi)
        pc = phi_plus.conj()
        for comp, dec, label in ((phi.plus, pc, "+"), (phi.minus, phi_minus, "-")):
            res = boundary_coefficients(comp, N)
            for n_ in range(-N, N + 1):
                direct = sum(c * a.integral_against(n_) for c, a in zip(dec.coefficients, dec.atoms)) / (2 * np.pi)
                gap = abs(res.coeffs[n_] - direct)
                if gap > max(tol, 10 * res.errors[n_]):
                    raise ValueError(
                        f"supplied decomposition disagrees with phi{label} at n={n_}: gap {gap:.3g}")
    return out


def _is_zero(w: BicomplexFunction) -> bool:
    from .functions import Polynomial

    return all(isinstance(c, Polynomial) and not c.coeffs for c in (w.plus, w.minus))


def save_bundle(rep, directory, metadata: Optional[dict] = None) -> str:
    """
    Write a representation as ``manifest.json`` plus one sampled CSV per
    function.  Returns the manifest path.
    """
    os.makedirs(directory, exist_ok=True)
    files = {}

    def put(name, fn):
        fn = _lift_bc(fn)
        g = rep.grid
        sampled = _on_grid(fn, g)
        path = os.path.join(directory, f"{name}.csv")
        write_csv(sampled, path)
        files[name] = os.path.basename(path)

    if isinstance(rep, FirstOrderRep):
        kind, n = "first-order", 1
        put("phi", rep.phi)
        put("correction", rep.correction)
        put("source", rep.source)
    else:
        kind, n = "higher-order", rep.n
        for k, ph in enumerate(rep.Phi):
            put(f"Phi_{k}", ph)
        put("Psi", rep.Psi)
        put("source", rep.source)
    manifest = {
        "kind": kind,
        "n": n,
        "grid": [rep.grid.n_r, rep.grid.n_theta],
        "files": files,
        "residuals": {k: float(v) for k, v in rep.residuals.items()},
        "metadata": metadata or {},
    }
    path = os.path.join(directory, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return path

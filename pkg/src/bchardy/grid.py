"""Polar tensor grids on the unit disk."""
from __future__ import annotations

from functools import cached_property

import numpy as np


class PolarGrid:
    """
    Tensor grid ``(r_i, theta_k)`` on the unit disk.

    Radii are Gauss-Legendre nodes mapped to (0, 1), which clusters them
    toward both r = 0 and r = 1; angles are equispaced.  ``weights[i, k]``
    is the area element ``w_i r_i dtheta`` of the cell around node
    ``(i, k)``, so the weights integrate polynomials in x, y (of moderate
    degree) exactly and sum to pi.
    """

    def __init__(self, n_r: int = 64, n_theta: int = 512):
        if n_r < 2:
            raise ValueError("need at least two radii")
        if n_theta < 4 or n_theta & (n_theta - 1):
            raise ValueError(f"n_theta must be a power of two, got {n_theta}")
        self.n_r = int(n_r)
        self.n_theta = int(n_theta)
        t, w = np.polynomial.legendre.leggauss(self.n_r)
        self.radii = (t + 1.0) / 2.0
        self.radial_weights = w / 2.0
        self.angles = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
        self.dtheta = 2.0 * np.pi / self.n_theta

    @classmethod
    def default(cls) -> "PolarGrid":
        return cls(64, 512)

    @property
    def shape(self):
        return (self.n_r, self.n_theta)

    @cached_property
    def points(self) -> np.ndarray:
        """Complex node positions, shape ``(n_r, n_theta)``."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    @cached_property
    def weights(self) -> np.ndarray:
        w = (self.radial_weights * self.radii)[:, None] * self.dtheta
        return np.broadcast_to(w, self.shape).copy()

    def refined(self, factor: int = 2) -> "PolarGrid":
        return PolarGrid(self.n_r * factor, self.n_theta * factor)

    def coarsened(self, factor: int = 2) -> "PolarGrid":
        return PolarGrid(max(2, self.n_r // factor), max(4, self.n_theta // factor))

    def spacing(self) -> float:
        """Largest distance between neighbouring nodes (radial or angular)."""
        dr = np.max(np.diff(np.concatenate([[0.0], self.radii, [1.0]])))
        return float(max(dr, self.dtheta))

    def interior_mask(self, r_max: float = 0.9) -> np.ndarray:
        return np.broadcast_to((self.radii <= r_max)[:, None], self.shape)

    def __eq__(self, other):
        return (
            isinstance(other, PolarGrid)
            and self.n_r == other.n_r
            and self.n_theta == other.n_theta
        )

    def __hash__(self):
        return hash((PolarGrid, self.n_r, self.n_theta))

    def __repr__(self):
        return f"PolarGrid(n_r={self.n_r}, n_theta={self.n_theta})"


def fornberg_weights(x0: float, x: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for the ``order``-th derivative at ``x0``.

    Fornberg's recursion; works for arbitrary (nonuniform) node sets.
    """
    n = len(x)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def radial_derivative_matrix(radii: np.ndarray, stencil: int = 5) -> np.ndarray:
    """Dense matrix D with ``D @ f(radii) ~ f'(radii)``; centred where possible."""
    n = len(radii)
    stencil = min(stencil, n)
    half = stencil // 2
    D = np.zeros((n, n))
    for i in range(n):
        lo = min(max(i - half, 0), n - stencil)
        idx = np.arange(lo, lo + stencil)
        D[i, idx] = fornberg_weights(radii[i], radii[idx], 1)
    return D


def spectral_theta_derivative(values: np.ndarray) -> np.ndarray:
    """d/dtheta along the last axis by trigonometric interpolation."""
    n = values.shape[-1]
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0  # Nyquist mode has no well-defined derivative
    return np.fft.ifft(1j * k * np.fft.fft(values, axis=-1), axis=-1)

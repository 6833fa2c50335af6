"""Norm scans, growth near the circle, and boundary values.

Run: python demos/hardy_and_boundary.py
"""

import numpy as np

from bchardy import (
    BoundaryDistribution,
    boundary_from_function,
    classify,
    growth_exponent,
    hp_norm,
    lp_boundary_convergence,
    make_test_function,
    poisson_reproduction_check,
)

pole = make_test_function("pole", 1.0)  # 1/(1 - z)
half = make_test_function("pole", 0.5)  # (1 - z)^(-1/2)
print("growth exponent of 1/(1-z):", round(growth_exponent(pole), 3))
print("growth exponent of (1-z)^(-1/2):", round(growth_exponent(half), 3))

# A singularity of order 1/4 keeps the function in H^2.
est = hp_norm(make_test_function("pole", 0.25), 2.0)
print("H^2 scan of (1-z)^(-1/4):", est.status, "settled" if est.settled else "not settled")

# 1/(1-z) is borderline for H^2: the scan stays bounded but does not settle.
print(classify(pole, "H^p", p=2.0).notes[0])

# For f(z) = z the L^2 distance to the boundary function is 2 pi (1 - r)^2.
z1 = make_test_function("monomial", 1)
for r, e in lp_boundary_convergence(z1, BoundaryDistribution.trig({1: 1.0}), 2.0, radii=(0.9, 0.99)):
    print(f"r={r}: error={e:.6g}  closed form={2 * np.pi * (1 - r) ** 2:.6g}")

f = make_test_function("exp")
pts = 0.9 * np.exp(1j * np.linspace(0, 6, 7))
print("Poisson reproduction error of exp:", poisson_reproduction_check(f, boundary_from_function(f, 256), pts))

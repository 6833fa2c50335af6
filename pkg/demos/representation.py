"""Split a solution of dbar f = w into a holomorphic part and a correction.

Run: python demos/representation.py   (about half a minute)
"""

import numpy as np

from bchardy import (
    BicomplexFunction,
    Polynomial,
    bc_partialbar_power,
    bc_polynomial,
    bnorm,
    build_higher,
    build_solution,
    higher_order_peel,
    recover_holomorphic,
)

# First order: f = phi + TB(w) with phi holomorphic.
w = BicomplexFunction(Polynomial({(0, 1): 1.0}), Polynomial({(1, 0): 1.0}))
phi = bc_polynomial({(1, 0): 1.0, (0, 0): 0.5})
f = build_solution(phi, w)
rep = recover_holomorphic(f, w)
g = rep.grid
inside = g.interior_mask(0.9)
err = np.asarray(bnorm(rep.phi(g.points) - phi(g.points)))[inside]
print("recovered phi, max error on |z| <= 0.9:", err.max())
print("holomorphicity gate passed:", bool(rep.residuals["phi_gate_passed"]))

# Second order: peel two levels off a polynomial in z and conj(z).
f2 = bc_polynomial({(2, 2): 1.0, (1, 1): 0.5, (1, 0): 1.0})
w2 = bc_partialbar_power(f2, 2).values
peeled = higher_order_peel(f2, w2, 2)
z = np.array([0.1 + 0.2j, -0.4, 0.5j])
again = build_higher(peeled.Phi, w2)
print("second-order rebuild error:", float(np.max(np.asarray(bnorm(again(z) - f2(z))))))

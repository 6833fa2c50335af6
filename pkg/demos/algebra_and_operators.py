"""Bicomplex arithmetic and the two area operators, step by step.

Run: python demos/algebra_and_operators.py
"""

import numpy as np

from bchardy import P_MINUS, P_PLUS, Bicomplex, BicomplexFunction, Polynomial, T, TB, bnorm, is_zero_divisor

# Bicomplex numbers carry a scalar part and a j-part, both complex.
a = Bicomplex(1 + 2j, 0.5 - 1j)
b = Bicomplex(-0.3j, 2.0)
print("a*b =", a * b, " b*a =", b * a)

# The idempotents split the algebra into two copies of C.
print("p+ p- =", P_PLUS * P_MINUS, "(a zero product of nonzero numbers)")
print("p+ is a zero divisor:", is_zero_divisor(P_PLUS))
print("components of a:", a.plus, a.minus)

# T inverts d/dz* on the disk; TB does the same for the bicomplex dbar.
z = np.array([0.3 + 0.2j, -0.5j, 0.7])
one = Polynomial({(0, 0): 1.0})
print("T(1) - conj(z):", np.max(np.abs(T(one, z) - np.conj(z))))
tb = TB(BicomplexFunction(one, one), z)
exact = Bicomplex(z.real + 0j, -z.imag + 0j)
print("TB(1) - (x - jy):", float(np.max(np.asarray(bnorm(tb - exact)))))

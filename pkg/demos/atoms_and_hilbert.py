"""Atoms on the circle and the conjugate-function operator.

Run: python demos/atoms_and_hilbert.py
"""

import numpy as np

from bchardy import (
    AtomicDecomposition,
    PAtom,
    hilbert_atomic,
    hilbert_continuity_check,
    hilbert_fft,
    random_atom,
    random_bc_corpus,
    validate_atom,
)

# +1/pi on [0, pi/2), -1/pi on [pi/2, pi): mean zero, bounded by 1/|J|.
atom = PAtom(1.0, 0.0, np.pi, np.array([1.0, -1.0]) / np.pi)
print("hand atom valid:", bool(validate_atom(atom)))
print("constant rejected:", not validate_atom(PAtom(1.0, 0.0, 2 * np.pi, [1 / (2 * np.pi)])))

rng = np.random.default_rng(0)
print("random p=1/2 atom valid:", bool(validate_atom(random_atom(rng, 0.5))))

# The transform of an atom has logarithmic peaks at the jumps.
h = hilbert_atomic(AtomicDecomposition([1.0], [atom], 1.0))
print("H(atom) at 0.5, 1.5, 4.0:", [round(float(np.real(h(t))), 6) for t in (0.5, 1.5, 4.0)])

th = 2 * np.pi * np.arange(256) / 256
print("H(cos 3t) - sin 3t:", np.max(np.abs(hilbert_fft(np.cos(3 * th)) - np.sin(3 * th))))

table = hilbert_continuity_check(random_bc_corpus(0, n=20), 1.0)
print("largest ratio over 20 random atomic boundaries:", table.max_ratio)

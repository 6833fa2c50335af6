"""
bchardy: numerical toolkit for bicomplex Hardy classes on the unit disk.

Bicomplex arithmetic, the Cauchy-Pompeiu and Theodorescu area operators,
Hardy-norm scans, boundary values, p-atoms with the circle Hilbert
transform, and representation formulas for d-bar equations.
"""
from .bicomplex import (
    ONE,
    J,
    P_MINUS,
    P_PLUS,
    ZERO,
    Bicomplex,
    IdempotentPair,
    as_bicomplex,
    bconj,
    bicomplexify,
    bnorm,
    from_idempotent,
    is_zero_divisor,
    mul,
    to_idempotent,
)
from .grid import PolarGrid
from .functions import *  # noqa: F401,F403
from .integral_ops import *  # noqa: F401,F403
from .hardy import *  # noqa: F401,F403
from .boundary import *  # noqa: F401,F403
from .atoms import *  # noqa: F401,F403
from .hilbert import *  # noqa: F401,F403
from .representation import *  # noqa: F401,F403

__version__ = "0.1.0"

"""Random hyperbolic test polynomials.

``det(x I + y (B + B^T) + z (C + C^T))`` with B, C having independent
N(1, 0.5^2) entries is hyperbolic with respect to (1, 0, 0), since the
pencil is the identity there.
"""

from __future__ import annotations

import numpy as np

from .detrep import HermitianPencil
from .poly import HomogeneousPoly
from .rng import make_rng, normal
from .verify import fit_determinant

MEAN = 1.0
STD = 0.5


def random_generator_pencil(d: int, seed=0) -> HermitianPencil:
    if d < 1:
        raise ValueError("degree must be at least 1")
    rng = make_rng(seed)
    B = normal(rng, MEAN, STD, (d, d))
    C = normal(rng, MEAN, STD, (d, d))
    return HermitianPencil(np.eye(d), B + B.T, C + C.T)


def generate_random_hyperbolic(d: int, seed=0) -> HomogeneousPoly:
    """Real degree-``d`` form, hyperbolic w.r.t. (1, 0, 0), with x^d coefficient ~1."""
    pencil = random_generator_pencil(d, seed)
    fit = fit_determinant(pencil, seed=seed)
    return HomogeneousPoly(d, fit.poly.coeffs.real)

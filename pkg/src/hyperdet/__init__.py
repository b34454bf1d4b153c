"""Definite Hermitian determinantal representations of hyperbolic plane curves.

Given a real ternary form f of degree d, hyperbolic with respect to e, find
Hermitian d x d matrices M1, M2, M3 and c > 0 with
f = c det(x M1 + y M2 + z M3) and M(e) positive definite.
"""

from .detrep import (
    HermitianPencil,
    Representation,
    RepresentOptions,
    assemble_system,
    extend_to_basis,
    represent,
    scale_constant,
    solve_system,
    vanishing_space,
)
from .errors import (
    DegreeError,
    DimensionError,
    HyperdetError,
    IndefiniteOutput,
    InputError,
    LargeResidual,
    NonPositiveScale,
    NotHyperbolic,
    NotInSpan,
    PairingFailure,
    PolynomialParseError,
    RankDeficient,
    TransversalityFailure,
)
from .generate import generate_random_hyperbolic, random_generator_pencil
from .intersect import ProjectivePoint, intersect_curves, split_conjugate
from .poly import HomogeneousPoly, format_polynomial, parse_polynomial
from .verify import (
    coefficient_error,
    hyperbolicity_check,
    interlacing_check,
    interpolate_determinant,
    representation_error,
)

__version__ = "0.1.0"

__all__ = [
    "DegreeError",
    "DimensionError",
    "HermitianPencil",
    "HomogeneousPoly",
    "HyperdetError",
    "IndefiniteOutput",
    "InputError",
    "LargeResidual",
    "NonPositiveScale",
    "NotHyperbolic",
    "NotInSpan",
    "PairingFailure",
    "PolynomialParseError",
    "ProjectivePoint",
    "RankDeficient",
    "RepresentOptions",
    "Representation",
    "TransversalityFailure",
    "assemble_system",
    "coefficient_error",
    "extend_to_basis",
    "format_polynomial",
    "generate_random_hyperbolic",
    "hyperbolicity_check",
    "interlacing_check",
    "interpolate_determinant",
    "intersect_curves",
    "parse_polynomial",
    "random_generator_pencil",
    "represent",
    "representation_error",
    "scale_constant",
    "solve_system",
    "split_conjugate",
    "vanishing_space",
]

"""Shared fixtures: the conic and the two-node hyperbolic quartic."""

import numpy as np

from hyperdet.detrep import HermitianPencil
from hyperdet.intersect import ProjectivePoint
from hyperdet.poly import parse_polynomial

CONIC = "x^2 - y^2 - z^2"
QUARTIC = "x^4 - 4x^2y^2 + y^4 - 4x^2z^2 - 2y^2z^2 + z^4"

QUARTIC_BASIS = (
    "x^3 - 2x*y^2 - 2x*z^2",
    "i*x^3 + 4i*x*y^2 - 4x^2*z - 4y^2*z + 4z^3",
    "-3i*x^3 + 4x^2*y + 4i*x*y^2 - 4y^3 + 4y*z^2",
    "-x^3 - 2i*x^2*y - 2i*x^2*z + 4x*y*z",
)

S3 = np.sqrt(3.0)
QUARTIC_S = (
    (0, 1, 1),
    (0, -1, 1),
    (2, S3, 1j),
    (2, -S3, 1j),
    (2, 1j, S3),
    (2, 1j, -S3),
)


def conic():
    return parse_polynomial(CONIC)


def conic_basis():
    return [parse_polynomial("2x"), parse_polynomial("z - i*y")]


def quartic():
    return parse_polynomial(QUARTIC)


def quartic_basis():
    return [parse_polynomial(t) for t in QUARTIC_BASIS]


def quartic_S():
    return [ProjectivePoint(np.array(p, dtype=complex)) for p in QUARTIC_S]


def quartic_golden_pencil() -> HermitianPencil:
    """(1/8) [[14x, 2z, 2ix-2y, 2i(y-z)], [2z, x, 0, -ix+2y],
    [-2ix-2y, 0, x, ix-2z], [-2i(y-z), ix+2y, -ix-2z, 4x]]"""
    i = 1j
    A = np.array([[14, 0, 2 * i, 0], [0, 1, 0, -i], [-2 * i, 0, 1, i], [0, i, -i, 4]])
    B = np.array([[0, 0, -2, 2 * i], [0, 0, 0, 2], [-2, 0, 0, 0], [-2 * i, 2, 0, 0]])
    C = np.array([[0, 2, 0, -2 * i], [2, 0, 0, 0], [0, 0, 0, -2], [2 * i, 0, -2, 0]])
    return HermitianPencil(A / 8, B / 8, C / 8)

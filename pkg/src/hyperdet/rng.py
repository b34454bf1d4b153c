"""Seeded random draws shared by every stochastic stage.

Uniforms come from numpy's PCG64 bit generator; Gaussians are produced from
those uniforms with the Box-Muller transform so that an instance is fully
determined by the seed and this file.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed=0) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a sequence of ints."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(*parts: int) -> int:
    """Stable 63-bit seed from a tuple of non-negative ints."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(2, np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])


def normal(rng: np.random.Generator, mean=0.0, std=1.0, size=None):
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    n = int(np.prod(shape, dtype=np.int64))
    pairs = (n + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(2.0 * np.pi * u2)
    z[1::2] = radius * np.sin(2.0 * np.pi * u2)
    out = mean + std * z[:n].reshape(shape)
    return float(out) if size is None else out


def unit_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` points uniformly distributed on the unit sphere in R^3."""
    v = normal(rng, size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_orthogonal(rng: np.random.Generator, n: int = 3) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-corrected)."""
    q, r = np.linalg.qr(normal(rng, size=(n, n)))
    return q * np.sign(np.diagonal(r))

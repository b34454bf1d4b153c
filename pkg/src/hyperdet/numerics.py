"""Dense numerical kernels: roots, nullspaces, least squares, determinants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian

NULLSPACE_TOL = 1e-9


def univariate_roots(coeffs, degree: int | None = None) -> np.ndarray:
    """Roots of ``c[0] t^n + c[1] t^(n-1) + ... + c[n]`` with multiplicity.

    Companion-matrix eigenvalues followed by one Newton step per root, kept
    only when it lowers ``|p(r)|``.
    """
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    n = len(c) - 1 if degree is None else int(degree)
    if len(c) != n + 1:
        raise ValueError(f"expected {n + 1} coefficients, got {len(c)}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    cmax = np.max(np.abs(c))
    if cmax == 0 or abs(c[0]) <= 1e-13 * cmax:
        raise ZeroDivisionError("leading coefficient vanishes")
    monic = c[1:] / c[0]
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -monic
    companion[np.arange(1, n), np.arange(n - 1)] = 1.0
    roots = np.linalg.eigvals(companion)

    dc = c[:-1] * np.arange(n, 0, -1)
    val = np.polyval(c, roots)
    der = np.polyval(dc, roots)
    with np.errstate(divide="ignore", invalid="ignore"):
        polished = roots - val / der
    better = np.isfinite(polished) & (np.abs(np.polyval(c, polished)) < np.abs(val))
    return np.where(better, polished, roots)


def root_scale(coeffs, r) -> np.ndarray:
    """``sum |c_i| |r|^i``: the evaluation magnitude bound used for root residuals."""
    return np.polyval(np.abs(np.asarray(coeffs)), np.abs(r))


def nullspace(A, tol: float = NULLSPACE_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of ``{v : A v ~ 0}``.

    A singular direction is kept when its singular value is at most
    ``tol * sigma_max``; missing singular values (wide matrices) count as 0.
    """
    A = np.atleast_2d(np.asarray(A))
    m, n = A.shape
    if A.size == 0:
        return np.eye(n, dtype=A.dtype)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    sigma = np.zeros(n)
    sigma[: len(s)] = s
    smax = sigma[0]
    keep = sigma <= tol * smax if smax > 0 else np.ones(n, dtype=bool)
    return vh[keep].conj().T


@dataclass(frozen=True)
class LeastSquaresSolution:
    x: np.ndarray
    residual_norm: float
    smallest_singular_value: float
    rank: int
    largest_singular_value: float = 0.0

    @property
    def condition(self) -> float:
        if self.smallest_singular_value == 0:
            return float("inf")
        return self.largest_singular_value / self.smallest_singular_value


def least_squares(A, b, rcond: float | None = None) -> LeastSquaresSolution:
    """Minimum-norm minimizer of ``|A x - b|`` via the SVD."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: A {A.shape}, b {b.shape}")
    m, n = A.shape
    if m < n:
        raise ValueError(f"underdetermined system: {m} rows < {n} unknowns")
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    if rcond is None:
        rcond = max(m, n) * np.finfo(float).eps
    smax = s[0] if len(s) else 0.0
    keep = s > rcond * smax
    rank = int(np.count_nonzero(keep))
    coef = (u[:, keep].T @ b) / s[keep]
    x = vh[keep].T @ coef
    residual = float(np.linalg.norm(A @ x - b))
    return LeastSquaresSolution(
        x=x,
        residual_norm=residual,
        smallest_singular_value=float(s[-1]) if len(s) else 0.0,
        rank=rank,
        largest_singular_value=float(smax),
    )


def det_numeric(A):
    """Determinant by pivoted LU; triangular inputs use the diagonal product.

    Accepts a stack of matrices with shape ``(..., n, n)``.
    """
    A = np.asarray(A)
    if A.shape[-1] != A.shape[-2]:
        raise ValueError("determinant of a non-square matrix")
    if A.ndim == 2:
        if not np.any(np.tril(A, -1)) or not np.any(np.triu(A, 1)):
            val = np.prod(np.diagonal(A))
        else:
            val = np.linalg.det(A)
        return complex(val) if np.iscomplexobj(A) else float(val)
    return np.linalg.det(A)


def is_positive_definite(H, tol: float = 1e-12) -> tuple[bool, float]:
    """Return ``(H > 0, smallest eigenvalue)`` for a Hermitian matrix."""
    H = np.asarray(H)
    scale = max(float(np.max(np.abs(H), initial=0.0)), 1.0)
    if np.max(np.abs(H - H.conj().T), initial=0.0) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    lam = float(np.linalg.eigvalsh((H + H.conj().T) / 2)[0])
    return lam > 0, lam


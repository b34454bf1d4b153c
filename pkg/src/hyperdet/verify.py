"""Checks on inputs and outputs: determinant recovery, error metrics,
hyperbolicity and interlacing along random lines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import DegreeError, IllConditionedFit, NotHermitian
from .poly import HomogeneousPoly, directional_derivative, monomial_values, num_monomials
from .rng import make_rng, normal, unit_sphere

TAU_HYP = 1e-7
FIT_COND_TOL = 1e-10
SAMPLE_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class DeterminantFit:
    poly: HomogeneousPoly
    residual: float  # |V c - det| / |det| over the samples
    sample_count: int
    condition: float


def fit_determinant(pencil, *, seed=0, oversample: int = 2, max_attempts: int = 3) -> DeterminantFit:
    """Recover ``det(x M1 + y M2 + z M3)`` by least squares on random sphere points.

    Samples ``oversample * binom(d+2, 2)`` seeded points of the unit sphere
    in R^3 and fits all degree-d monomial coefficients.  On a real point the
    determinant of a Hermitian pencil is real, so sample imaginary parts must
    be negligible.
    """
    d = pencil.d
    if d < 1:
        raise DegreeError("pencil must be at least 1x1")
    n = num_monomials(d)
    for attempt in range(max_attempts):
        rng = make_rng([int(seed), 7919, attempt])
        pts = unit_sphere(rng, oversample * n)
        dets = numerics.det_numeric(pencil.evaluate(pts))
        scale = float(np.max(np.abs(dets)))
        if np.max(np.abs(np.imag(dets))) > SAMPLE_IMAG_TOL * max(scale, 1.0):
            raise NotHermitian("determinant samples are not real; pencil is not Hermitian")
        V = monomial_values(d, pts)
        sol = numerics.least_squares(V, np.real(dets))
        if sol.smallest_singular_value < FIT_COND_TOL * sol.largest_singular_value:
            continue
        resid = sol.residual_norm / max(float(np.linalg.norm(dets)), np.finfo(float).tiny)
        return DeterminantFit(HomogeneousPoly(d, sol.x), resid, len(pts), sol.condition)
    raise IllConditionedFit(f"interpolation matrix ill-conditioned after {max_attempts} attempts")


def interpolate_determinant(pencil, *, seed=0) -> HomogeneousPoly:
    return fit_determinant(pencil, seed=seed).poly


@dataclass(frozen=True)
class ErrorReport:
    abs_error: float
    rel_error: float
    c_used: float
    sample_count: int
    fit_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "c_used": self.c_used,
            "sample_count": self.sample_count,
            "fit_residual": self.fit_residual,
        }


def coefficient_error(f: HomogeneousPoly, pencil, c: float, *, seed=0) -> ErrorReport:
    if f.degree != pencil.d:
        raise DegreeError(f"f has degree {f.degree} but the pencil is {pencil.d}x{pencil.d}")
    fit = fit_determinant(pencil, seed=seed)
    diff = f.coeffs - c * fit.poly.coeffs
    abs_err = float(np.max(np.abs(diff)))
    return ErrorReport(
        abs_error=abs_err,
        rel_error=abs_err / f.max_abs_coeff(),
        c_used=float(c),
        sample_count=fit.sample_count,
        fit_residual=fit.residual,
    )


def representation_error(f: HomogeneousPoly, rep, *, seed=0) -> ErrorReport:
    """Max coefficient gap between f and ``c * det(pencil)``, absolute and relative."""
    return coefficient_error(f, rep.pencil, rep.c, seed=seed)


# restrictions to lines ----------------------------------------------------

def restrict_to_lines(p: HomogeneousPoly, e, points) -> np.ndarray:
    """Coefficients (highest first) of ``t -> p(t e + q)`` for each row ``q``.

    The coefficient of t^s is ``(D_e^s p)(q) / s!``, so one set of exact
    directional derivatives serves every line.
    """
    e = np.asarray(e, dtype=float)
    Q = np.atleast_2d(np.asarray(points, dtype=float))
    d = p.degree
    out = np.empty((len(Q), d + 1), dtype=complex)
    deriv = p
    fact = 1.0
    for s in range(d + 1):
        out[:, d - s] = deriv.evaluate(Q) / fact
        if s < d:
            deriv = directional_derivative(deriv, e)
            fact *= s + 1
    return out


def restrict_to_line(p: HomogeneousPoly, e, point) -> np.ndarray:
    """Coefficients (highest first) of ``t -> p(t e + point)``."""
    return restrict_to_lines(p, e, np.asarray(point, dtype=float)[None])[0]


def line_roots(p: HomogeneousPoly, e, points) -> list[np.ndarray]:
    """Roots in t of ``p(t e + q)`` for each row ``q``, shifted back to the input ``q``.

    Moving ``q`` along ``e`` leaves the line unchanged but moves the roots,
    so each base point is first projected orthogonally to ``e`` and then
    moved to the root centroid; clustered roots far from t = 0 are
    otherwise badly conditioned in the monomial basis.
    """
    e = np.asarray(e, dtype=float)
    Q = np.atleast_2d(np.asarray(points, dtype=float))
    d = p.degree
    shift = -(Q @ e) / (e @ e)
    base = Q + shift[:, None] * e
    coeffs = restrict_to_lines(p, e, base)
    if d > 0:
        centroid = -(coeffs[:, 1] / (d * coeffs[:, 0])).real
        base = base + centroid[:, None] * e
        shift = shift + centroid
        coeffs = restrict_to_lines(p, e, base)
    out = []
    for c, t0 in zip(coeffs, shift):
        # substitute t = sigma u with sigma a bound on the root moduli
        ratios = np.abs(c[1:] / c[0]) ** (1.0 / np.arange(1, d + 1))
        sigma = float(np.max(ratios, initial=0.0)) or 1.0
        u = numerics.univariate_roots(c * sigma ** -np.arange(d + 1.0))
        out.append(sigma * u + t0)
    return out


@dataclass(frozen=True)
class HyperbolicityResult:
    hyperbolic: bool
    worst_imag: float
    witness: np.ndarray | None = None  # a line base point with non-real roots

    def __bool__(self):
        return self.hyperbolic


def hyperbolicity_check(f: HomogeneousPoly, e, trials: int = 50, seed=0) -> HyperbolicityResult:
    """Sample ``trials`` real lines through ``e``; all roots must be real.

    A failure is definitive (the witness line is returned); a pass is only
    evidence.
    """
    e = np.asarray(e, dtype=float)
    if abs(f.evaluate(e)) == 0:
        raise ValueError("f(e) must be nonzero")
    rng = make_rng([int(seed), 104729])
    lines = normal(rng, size=(trials, 3))
    worst = 0.0
    witness = None
    ok = True
    for p, roots in zip(lines, line_roots(f, e, lines)):
        if len(roots) == 0:
            continue
        worst = max(worst, float(np.max(np.abs(roots.imag))))
        if ok and np.max(np.abs(roots.imag) / (1 + np.abs(roots))) > TAU_HYP:
            ok = False
            witness = p
    return HyperbolicityResult(ok, worst, witness)


@dataclass(frozen=True)
class InterlacingResult:
    interlaces: bool
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.interlaces


def _interlace_on_line(f, g, e, p) -> bool:
    fr = line_roots(f, e, p)[0]
    gr = line_roots(g, e, p)[0]
    if np.any(np.abs(fr.imag) > TAU_HYP * (1 + np.abs(fr))) or np.any(
        np.abs(gr.imag) > TAU_HYP * (1 + np.abs(gr))
    ):
        return False
    fr = np.sort(fr.real)
    gr = np.sort(gr.real)
    span = fr[-1] - fr[0] if len(fr) > 1 else 1.0
    slack = 1e-8 * max(span, 1e-300)
    return bool(np.all(gr >= fr[:-1] - slack) and np.all(gr <= fr[1:] + slack))


def interlacing_check(
    f: HomogeneousPoly, g: HomogeneousPoly, e, trials: int = 50, seed=0, points=None
) -> InterlacingResult:
    """Weak interlacing of the roots of ``g(te+p)`` and ``f(te+p)``.

    ``points`` overrides the random line base points.
    """
    if g.degree != f.degree - 1:
        raise DegreeError("interlacer must have degree deg f - 1")
    e = np.asarray(e, dtype=float)
    if points is None:
        rng = make_rng([int(seed), 130363])
        points = [normal(rng, size=3) for _ in range(trials)]
    for p in points:
        p = np.asarray(p, dtype=float)
        if not _interlace_on_line(f, g, e, p):
            return InterlacingResult(False, p)
    return InterlacingResult(True)


def check_definite(rep_or_pencil, e) -> bool:
    pencil = getattr(rep_or_pencil, "pencil", rep_or_pencil)
    ok, _ = numerics.is_positive_definite(pencil.evaluate(np.asarray(e, dtype=float)))
    return ok

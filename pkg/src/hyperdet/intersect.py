"""Intersection of two plane curves V(f) and V(g) and the conjugate split.

The points are found by hidden-variable elimination: after a random
orthogonal change of coordinates, dehomogenize at z = 1 and write the
Sylvester matrix of f and g with respect to x as a matrix polynomial in y.
Its determinant is the resultant, of degree d(d-1) in y; rather than
expanding it (which cancels catastrophically for d >= 7) the y-roots are
the finite eigenvalues of the companion linearization.  x is read off the
Sylvester null vector and each point is polished by Newton's method on the
original f and g.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DegreeError, InputError, PairingFailure, TransversalityFailure
from .poly import HomogeneousPoly, change_coords, exponents, partial
from .rng import make_rng, normal, random_orthogonal

log = logging.getLogger(__name__)

TAU_REAL = 1e-8
TAU_PAIR = 1e-8
TAU_SEP = 1e-7
TAU_JAC = 1e-8
RESIDUAL_TOL = 1e-12

_TIE_RTOL = 1e-10


@dataclass(frozen=True)
class IntersectOptions:
    tau_real: float = TAU_REAL
    tau_pair: float = TAU_PAIR
    tau_sep: float = TAU_SEP
    tau_jac: float = TAU_JAC
    residual_tol: float = RESIDUAL_TOL
    max_attempts: int = 5
    newton_iterations: int = 60


def canonical_coords(coords) -> np.ndarray:
    """Scale so the coordinate of largest modulus is exactly 1.

    Near-ties (relative 1e-10) go to the earliest index so that a point and
    its numerically computed conjugate pick the same coordinate.
    """
    c = np.asarray(coords, dtype=complex).reshape(3)
    mod = np.abs(c)
    top = mod.max()
    if top == 0 or not np.all(np.isfinite(c)):
        raise ValueError("the zero vector is not a projective point")
    k = int(np.flatnonzero(mod >= top * (1 - _TIE_RTOL))[0])
    out = c / c[k]
    out[k] = 1.0
    return out


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of complex projective 2-space, stored canonically normalized."""

    coords: np.ndarray

    def __post_init__(self):
        c = canonical_coords(self.coords)
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def unit_index(self) -> int:
        return int(np.flatnonzero(self.coords == 1.0)[0])

    def is_real(self, tol: float = TAU_REAL) -> bool:
        return bool(np.max(np.abs(self.coords.imag)) <= tol)

    def conjugate(self) -> ProjectivePoint:
        return ProjectivePoint(np.conj(self.coords))

    def distance(self, other: ProjectivePoint) -> float:
        return float(chordal_distances(self.coords[None], other.coords[None])[0, 0])

    def sort_key(self):
        key = [self.unit_index]
        for v in self.coords:
            key.extend((round(v.real, 10) + 0.0, round(v.imag, 10) + 0.0))
        return tuple(key)

    def __repr__(self):
        inner = ":".join(f"{complex(v):.6g}" for v in self.coords)
        return f"ProjectivePoint([{inner}])"


def chordal_distances(P, Q) -> np.ndarray:
    """Pairwise sine of the angle between rows of ``P`` and rows of ``Q``.

    Uses the Lagrange identity ``|p|^2|q|^2 - |<p,q>|^2 = sum |p_i q_j - p_j q_i|^2``
    so that tiny distances keep full relative accuracy.
    """
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    acc = np.zeros((len(P), len(Q)))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        acc += np.abs(np.outer(P[:, i], Q[:, j]) - np.outer(P[:, j], Q[:, i])) ** 2
    norms = np.outer(np.linalg.norm(P, axis=1), np.linalg.norm(Q, axis=1))
    return np.sqrt(acc) / norms


# evaluation helpers -------------------------------------------------------

class _CurveData:
    """Cached derivative data for residuals, Newton steps and Jacobian checks."""

    def __init__(self, p: HomogeneousPoly):
        self.poly = p
        self.degree = p.degree
        if p.degree > 0:
            self.grad = [partial(p, m) for m in range(3)]
            absp = HomogeneousPoly(p.degree, np.abs(p.coeffs))
            self.abs_grad = [partial(absp, m) for m in range(3)]
        else:
            self.grad = self.abs_grad = None

    def residual(self, pts):
        """``|p(v)| / (sum |c| * max|v|^d)``."""
        pts = np.asarray(pts)
        val = np.abs(self.poly.evaluate(pts))
        scale = np.sum(np.abs(self.poly.coeffs)) * np.max(np.abs(pts), axis=-1) ** self.degree
        return val / np.where(scale > 0, scale, 1.0)

    def gradient(self, pts):
        return np.stack([q.evaluate(pts) for q in self.grad], axis=-1)

    def scaled_gradient(self, pts):
        bound = np.max(
            np.stack([q.evaluate(np.abs(pts)).real for q in self.abs_grad], axis=-1), axis=-1
        )
        bound = np.where(bound > 0, bound, 1.0)
        return self.gradient(pts) / bound[..., None]


def _normalize_rows(P):
    idx = np.argmax(np.abs(P), axis=1)
    return P / P[np.arange(len(P)), idx][:, None], idx


def newton_refine(f: HomogeneousPoly, g: HomogeneousPoly, points, iterations: int = 60):
    """Polish approximate common zeros of ``f`` and ``g``.

    Works in the affine chart where the largest coordinate is 1.  Returns the
    best iterate per point and its relative residual
    ``max(|f(p)|/sum|c||p^mu|, |g(p)|/...)``.
    """
    F, G = _CurveData(f), _CurveData(g)
    P = np.array(points, dtype=complex).reshape(-1, 3)
    if len(P) == 0:
        return P, np.zeros(0)
    P, chart = _normalize_rows(P)
    best = P.copy()
    best_res = np.maximum(F.residual(P), G.residual(P))
    active = np.ones(len(P), dtype=bool)
    rows = np.arange(len(P))
    for _ in range(iterations):
        if not active.any():
            break
        free = np.array([[j for j in range(3) if j != k] for k in chart])
        vals = np.stack([f.evaluate(P), g.evaluate(P)], axis=-1)
        J = np.stack([F.gradient(P), G.gradient(P)], axis=1)  # (m, 2, 3)
        Jf = np.take_along_axis(J, free[:, None, :], axis=2)  # (m, 2, 2)
        step = -np.einsum("mij,mj->mi", np.linalg.pinv(Jf), vals)
        step[~active] = 0
        Pn = P.copy()
        Pn[rows[:, None], free] += step
        Pn, chart = _normalize_rows(Pn)
        res = np.maximum(F.residual(Pn), G.residual(Pn))
        improved = res < best_res
        best[improved] = Pn[improved]
        best_res[improved] = res[improved]
        tiny = np.max(np.abs(step), axis=1) <= 4 * np.finfo(float).eps
        active &= ~tiny & np.isfinite(res)
        P = Pn
    return best, best_res


def jacobian_sigmas(f: HomogeneousPoly, g: HomogeneousPoly, points) -> np.ndarray:
    """Smallest singular value of the row-scaled 2x3 Jacobian at each point."""
    P = np.array(points, dtype=complex).reshape(-1, 3)
    if len(P) == 0:
        return np.zeros(0)
    P, _ = _normalize_rows(P)
    J = np.stack([_CurveData(f).scaled_gradient(P), _CurveData(g).scaled_gradient(P)], axis=1)
    return np.linalg.svd(J, compute_uv=False)[:, -1]


# elimination --------------------------------------------------------------

def _x_coefficients(p: HomogeneousPoly) -> np.ndarray:
    """``C[i, j]`` = coefficient of x^i y^j in p(x, y, 1)."""
    d = p.degree
    C = np.zeros((d + 1, d + 1), dtype=complex)
    exps = exponents(d)
    C[exps[:, 0], exps[:, 1]] = p.coeffs
    return C


def sylvester(F: np.ndarray, G: np.ndarray, y) -> np.ndarray:
    """Sylvester matrices in x of F(x, y), G(x, y) at each y (shape ``(..., n, n)``).

    ``F[i, j]`` is the coefficient of x^i y^j.  Columns are indexed by powers
    of x, so that ``S @ (1, x, x^2, ...)`` lists the multiples x^k F, x^k G.
    """
    y = np.asarray(y, dtype=complex)
    df, dg = F.shape[0] - 1, G.shape[0] - 1
    n = df + dg
    ypow_f = y[..., None] ** np.arange(F.shape[1])
    ypow_g = y[..., None] ** np.arange(G.shape[1])
    fx = ypow_f @ F.T  # (..., df+1): coefficient of x^i
    gx = ypow_g @ G.T
    S = np.zeros(y.shape + (n, n), dtype=complex)
    for k in range(dg):
        S[..., k, k : k + df + 1] = fx
    for k in range(df):
        S[..., dg + k, k : k + dg + 1] = gx
    return S


def sylvester_coefficients(F: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Matrix coefficients ``S_k`` with ``sylvester(F, G, y) = sum_k y^k S_k``."""
    deg_y = max(F.shape[1], G.shape[1]) - 1
    return np.stack([
        sylvester(F, G, 0.0) if k == 0 else _sylvester_y_coeff(F, G, k)
        for k in range(deg_y + 1)
    ])


def _sylvester_y_coeff(F, G, k):
    Fk = np.zeros_like(F)
    Gk = np.zeros_like(G)
    if k < F.shape[1]:
        Fk[:, 0] = F[:, k]
    if k < G.shape[1]:
        Gk[:, 0] = G[:, k]
    return sylvester(Fk, Gk, 0.0)


def hidden_variable_roots(F: np.ndarray, G: np.ndarray, N: int) -> np.ndarray:
    """The ``N`` finite y-values where the Sylvester matrix in x is singular.

    These are the roots of the resultant Res_x(F, G)(y), obtained as the
    eigenvalues of a companion linearization of the matrix polynomial
    ``S(y) = sum_k y^k S_k``; the determinant is never formed.  The
    linearization has extra infinite eigenvalues, so the ``N`` of smallest
    modulus are returned.
    """
    coeffs = sylvester_coefficients(F, G)
    k = len(coeffs) - 1
    n = coeffs.shape[1]
    A = np.zeros((n * k, n * k), dtype=complex)
    B = np.eye(n * k, dtype=complex)
    for j in range(k):
        A[:n, j * n : (j + 1) * n] = -coeffs[k - 1 - j]
    A[n:, : n * (k - 1)] += np.eye(n * (k - 1))
    B[:n, :n] = coeffs[k]
    alpha, beta = scipy.linalg.eigvals(A, B, homogeneous_eigvals=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = alpha / beta
    lam = lam[np.isfinite(lam)]
    if len(lam) < N:
        raise np.linalg.LinAlgError(f"only {len(lam)} finite eigenvalues, need {N}")
    return lam[np.argsort(np.abs(lam), kind="stable")[:N]]


def _x_from_nullvector(F, G, ys):
    S = sylvester(F, G, ys)
    _, _, vh = np.linalg.svd(S)
    v = vh[:, -1, :].conj()
    num = np.sum(np.conj(v[:, :-1]) * v[:, 1:], axis=1)
    den = np.sum(np.abs(v[:, :-1]) ** 2, axis=1)
    return num / den


def _candidate_points(f, g, rng):
    T = random_orthogonal(rng)
    fT = change_coords(f, T)
    gT = change_coords(g, T)
    fT = fT / fT.max_abs_coeff()
    gT = gT / gT.max_abs_coeff()
    F, G = _x_coefficients(fT), _x_coefficients(gT)
    N = f.degree * g.degree
    ys = hidden_variable_roots(F, G, N)
    xs = _x_from_nullvector(F, G, ys)
    local = np.stack([xs, ys, np.ones_like(ys)], axis=1)
    return local @ T.T


def _dedupe(points, tau):
    kept = []
    for p in points:
        if not kept or chordal_distances(p[None], np.array(kept)).min() > tau:
            kept.append(p)
    return kept


def intersect_curves(
    f: HomogeneousPoly,
    g: HomogeneousPoly,
    *,
    seed=0,
    options: IntersectOptions | None = None,
) -> list[ProjectivePoint]:
    """The d(d-1) points of V(f) and V(g), sorted canonically.

    Raises ``TransversalityFailure`` when, after ``max_attempts`` random
    coordinate changes, fewer than d(d-1) distinct simple points are found.
    """
    opts = options or IntersectOptions()
    if g.degree != f.degree - 1:
        raise DegreeError(f"deg g must be deg f - 1, got {f.degree} and {g.degree}")
    if not (f.is_real() and g.is_real()):
        raise InputError("f and g must have real coefficients")
    fr = HomogeneousPoly(f.degree, f.coeffs.real)
    gr = HomogeneousPoly(g.degree, g.coeffs.real)
    N = f.degree * g.degree
    if N == 0:
        return []

    pool: list[np.ndarray] = []
    singular = 0
    for attempt in range(opts.max_attempts):
        rng = make_rng([int(seed), attempt])
        try:
            cand = _candidate_points(fr, gr, rng)
        except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
            log.debug("attempt %d: elimination failed: %s", attempt, exc)
            continue
        cand = cand[np.all(np.isfinite(cand), axis=1)]
        pts, res = newton_refine(fr, gr, cand, opts.newton_iterations)
        pts = pts[res <= opts.residual_tol]
        sig = jacobian_sigmas(fr, gr, pts)
        singular = max(singular, int(np.count_nonzero(sig < opts.tau_jac)))
        for p in pts[sig >= opts.tau_jac]:
            if not pool or chordal_distances(p[None], np.array(pool)).min() > opts.tau_sep:
                pool.append(p)
        log.debug("attempt %d: %d/%d simple points", attempt, len(pool), N)
        if len(pool) >= N:
            break

    if len(pool) != N:
        raise TransversalityFailure(
            f"found {len(pool)} distinct simple intersection points, expected {N}"
            + (f"; {singular} singular point(s) detected" if singular else "")
        )
    points = [ProjectivePoint(p) for p in pool]
    return sorted(points, key=ProjectivePoint.sort_key)


# diagnostics and splitting -----------------------------------------------

@dataclass
class TransversalityReport:
    count: int
    expected_count: int
    min_distance: float
    jacobian_sigmas: np.ndarray
    residuals: np.ndarray
    real_flags: np.ndarray
    tau_sep: float
    tau_jac: float

    @property
    def separated(self) -> bool:
        return self.min_distance > self.tau_sep

    @property
    def simple(self) -> bool:
        return bool(np.all(self.jacobian_sigmas > self.tau_jac))

    @property
    def non_real(self) -> bool:
        return not bool(np.any(self.real_flags))

    @property
    def passed(self) -> bool:
        return self.separated and self.simple and self.non_real

    @property
    def min_jacobian_sigma(self) -> float:
        return float(self.jacobian_sigmas.min()) if len(self.jacobian_sigmas) else float("inf")

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0

    def failures(self) -> list[str]:
        out = []
        if not self.separated:
            out.append(f"points not separated (min distance {self.min_distance:.3g})")
        if not self.simple:
            out.append(f"near-singular Jacobian (min sigma {self.min_jacobian_sigma:.3g})")
        if not self.non_real:
            out.append(f"{int(np.sum(self.real_flags))} real point(s)")
        return out


def check_transverse(f, g, points, options: IntersectOptions | None = None) -> TransversalityReport:
    opts = options or IntersectOptions()
    P = np.array([p.coords for p in points], dtype=complex).reshape(-1, 3)
    if len(P) > 1:
        D = chordal_distances(P, P)
        D[np.diag_indices_from(D)] = np.inf
        min_dist = float(D.min())
    else:
        min_dist = float("inf")
    res = np.maximum(_CurveData(f).residual(P), _CurveData(g).residual(P)) if len(P) else np.zeros(0)
    return TransversalityReport(
        count=len(P),
        expected_count=f.degree * g.degree,
        min_distance=min_dist,
        jacobian_sigmas=jacobian_sigmas(f, g, P),
        residuals=np.asarray(res, dtype=float),
        real_flags=np.array([p.is_real(opts.tau_real) for p in points], dtype=bool),
        tau_sep=opts.tau_sep,
        tau_jac=opts.tau_jac,
    )


@dataclass
class IntersectionSet:
    all_points: list[ProjectivePoint]
    S: list[int]
    conj_pairing: list[int]
    report: TransversalityReport | None = None
    direction: tuple[float, float, float] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def S_points(self) -> list[ProjectivePoint]:
        return [self.all_points[i] for i in self.S]

    @property
    def conjugate_points(self) -> list[ProjectivePoint]:
        return [self.all_points[self.conj_pairing[i]] for i in self.S]


def _in_positive_half(p: ProjectivePoint, tau_real: float) -> bool | None:
    for v in p.coords:
        if abs(v.imag) > tau_real:
            return v.imag > 0
    return None


def split_conjugate(
    points,
    *,
    options: IntersectOptions | None = None,
    report: TransversalityReport | None = None,
    direction=None,
) -> IntersectionSet:
    """Match every point with its conjugate and keep one of each pair in S.

    The representative is the point whose first non-real coordinate (in
    canonical form) has positive imaginary part.  A real point may appear
    twice (a double point); the two copies are then paired and the first
    goes to S.
    """
    opts = options or IntersectOptions()
    points = list(points)
    n = len(points)
    if n % 2:
        raise PairingFailure(f"cannot pair an odd number ({n}) of points")
    if n == 0:
        return IntersectionSet([], [], [], report, direction)
    P = np.array([p.coords for p in points])
    D = chordal_distances(np.conj(P), P)
    D[np.diag_indices(n)] = np.inf
    partner = np.argmin(D, axis=1)
    for i in range(n):
        j = partner[i]
        if partner[j] != i or D[i, j] > opts.tau_pair:
            raise PairingFailure(
                f"point {i} has no unique conjugate partner (distance {D[i, j]:.3g})"
            )
    S = []
    for i in range(n):
        j = int(partner[i])
        if j < i:
            continue
        side = _in_positive_half(points[i], opts.tau_real)
        if side is None:
            S.append(i)
            continue
        other = _in_positive_half(points[j], opts.tau_real)
        if other is side:
            raise PairingFailure(f"points {i} and {j} fall on the same side of the split")
        S.append(i if side else j)
    return IntersectionSet(points, sorted(S), [int(v) for v in partner], report, direction)


def perturb_direction(e, seed=0, magnitude: float = 1e-3) -> tuple[float, float, float]:
    """``e + delta`` with a seeded random ``|delta| = magnitude * |e|``, rescaled to ``|e|``."""
    e = np.asarray(e, dtype=float)
    if magnitude == 0:
        return tuple(float(v) for v in e)
    norm = np.linalg.norm(e)
    delta = normal(make_rng(seed), size=3)
    ep = e + magnitude * norm * delta / np.linalg.norm(delta)
    ep *= norm / np.linalg.norm(ep)
    return tuple(float(v) for v in ep)


# point-set JSON -----------------------------------------------------------

def points_to_dict(points, S_indices=None) -> dict:
    out = {
        "points": [
            {"coords": [[float(v.real), float(v.imag)] for v in p.coords]} for p in points
        ]
    }
    if S_indices is not None:
        out["S_indices"] = [int(i) for i in S_indices]
    return out


def points_from_dict(data: dict):
    points = [
        ProjectivePoint(np.array([complex(re, im) for re, im in item["coords"]]))
        for item in data["points"]
    ]
    S = data.get("S_indices")
    return points, (None if S is None else [int(i) for i in S])


def load_points(path):
    with open(path) as fh:
        return points_from_dict(json.load(fh))

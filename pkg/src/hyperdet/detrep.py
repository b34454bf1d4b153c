"""Hermitian determinantal representations from a vanishing basis.

Given the conjugate half S of V(f) and V(g), the degree-(d-1) forms vanishing
on S span a d-dimensional space containing g.  Writing a = (g, a_12, ..., a_1d)
for a basis, the pencil M = x M1 + y M2 + z M3 is the unique Hermitian
solution of

    a M = (f, 0, ..., 0)        M conj(a)^T = (f, 0, ..., 0)^T,

and f = c det(M) with c > 0.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import (
    DimensionError,
    IndefiniteOutput,
    InputError,
    LargeResidual,
    NonPositiveScale,
    NotHyperbolic,
    NotInSpan,
    RankDeficient,
    TransversalityFailure,
)
from .intersect import (
    IntersectionSet,
    IntersectOptions,
    ProjectivePoint,
    check_transverse,
    intersect_curves,
    perturb_direction,
    split_conjugate,
)
from .poly import (
    HomogeneousPoly,
    directional_derivative,
    monomial_values,
    num_monomials,
    shift_table,
)

log = logging.getLogger(__name__)

TAU_RES = 1e-6
SPAN_TOL = 1e-7
VANISH_TOL = 1e-8


# data model ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HermitianPencil:
    """``x M1 + y M2 + z M3`` with Hermitian ``d x d`` matrices."""

    M1: np.ndarray
    M2: np.ndarray
    M3: np.ndarray

    def __post_init__(self):
        mats = [np.array(M, dtype=complex) for M in (self.M1, self.M2, self.M3)]
        d = mats[0].shape[0]
        for M in mats:
            if M.shape != (d, d):
                raise ValueError("pencil matrices must be square and of equal size")
            M.flags.writeable = False
        for name, M in zip(("M1", "M2", "M3"), mats):
            object.__setattr__(self, name, M)

    @property
    def d(self) -> int:
        return self.M1.shape[0]

    @property
    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.M1, self.M2, self.M3

    @classmethod
    def from_params(cls, theta, d: int) -> HermitianPencil:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (3 * d * d,):
            raise ValueError(f"expected {3 * d * d} parameters, got {theta.shape}")
        P = hermitian_parameter_map(d)
        entries = (P @ theta).reshape(3, d, d)
        return cls(*entries)

    def evaluate(self, point) -> np.ndarray:
        """``M(p)``; a stack of points of shape ``(..., 3)`` gives ``(..., d, d)``."""
        p = np.asarray(point)
        return (
            p[..., 0, None, None] * self.M1
            + p[..., 1, None, None] * self.M2
            + p[..., 2, None, None] * self.M3
        )

    def scaled(self, s) -> HermitianPencil:
        return HermitianPencil(self.M1 * s, self.M2 * s, self.M3 * s)

    def is_hermitian(self) -> bool:
        return all(np.array_equal(M, M.conj().T) for M in self.matrices)

    def __neg__(self):
        return self.scaled(-1.0)


@dataclass(frozen=True)
class VanishingBasis:
    d: int
    entries: tuple[HomogeneousPoly, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if len(entries) != self.d:
            raise DimensionError(f"basis needs {self.d} entries, got {len(entries)}")
        for a in entries:
            if a.degree != self.d - 1:
                raise DimensionError(f"basis entries must have degree {self.d - 1}")
        object.__setattr__(self, "entries", entries)

    @property
    def a11(self) -> HomogeneousPoly:
        return self.entries[0]

    def coefficient_matrix(self) -> np.ndarray:
        return np.stack([a.coeffs for a in self.entries])

    def vanishing_residual(self, points) -> float:
        """Largest ``|a(p)| / sum|c|`` over entries and (canonical) points."""
        if not points:
            return 0.0
        P = np.array([p.coords for p in points])
        V = monomial_values(self.d - 1, P)
        C = self.coefficient_matrix()
        scale = np.sum(np.abs(C), axis=1)
        return float(np.max(np.abs(V @ C.T) / scale))

    def smallest_singular_ratio(self) -> float:
        s = np.linalg.svd(self.coefficient_matrix(), compute_uv=False)
        return float(s[-1] / s[0])


@dataclass
class LinearSystem:
    """Realified coefficient-matching system ``A theta = b`` in the 3 d^2 Hermitian parameters."""

    d: int
    A: np.ndarray
    b: np.ndarray
    complex_rows: np.ndarray  # complex coefficient rows before realification
    complex_rhs: np.ndarray

    @property
    def n_complex_equations(self) -> int:
        return self.complex_rows.shape[0]

    @property
    def n_unknowns(self) -> int:
        return self.A.shape[1]

    def redundancy_mismatch(self) -> float:
        """Max difference between the second block and the conjugate of the first."""
        half = self.n_complex_equations // 2
        C1, C2 = self.complex_rows[:half], self.complex_rows[half:]
        return float(np.max(np.abs(C2 - np.conj(C1)), initial=0.0))


@dataclass
class Representation:
    pencil: HermitianPencil
    c: float
    lsq: numerics.LeastSquaresSolution
    basis: VanishingBasis
    direction: tuple[float, float, float]
    target_direction: tuple[float, float, float]
    intersection: IntersectionSet | None = None
    retries: int = 0
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    min_eigenvalue: float = float("nan")

    @property
    def d(self) -> int:
        return self.pencil.d


# vanishing space --------------------------------------------------------

def vanishing_space(S, d: int, tol: float = numerics.NULLSPACE_TOL) -> list[HomogeneousPoly]:
    """Orthonormal basis of the degree-(d-1) forms vanishing on the points ``S``."""
    S = list(S)
    if len(S) != d * (d - 1) // 2:
        raise DimensionError(f"expected {d * (d - 1) // 2} points for d={d}, got {len(S)}")
    if S:
        P = np.array([p.coords for p in S])
        E = monomial_values(d - 1, P)
    else:
        E = np.zeros((0, num_monomials(d - 1)), dtype=complex)
    N = numerics.nullspace(E, tol)
    if N.shape[1] != d:
        raise DimensionError(
            f"vanishing space has numerical dimension {N.shape[1]}, expected {d}"
        )
    return [HomogeneousPoly(d - 1, N[:, k]) for k in range(d)]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) >= np.abs(v).max() * (1 - 1e-10)))
    return v * (abs(v[k]) / v[k])


def extend_to_basis(g: HomogeneousPoly, space, tol: float = SPAN_TOL) -> VanishingBasis:
    """``(g, a_12, ..., a_1d)``: g followed by an orthogonal complement inside ``space``.

    The complement vectors are rescaled to the coefficient norm of g and
    phase-fixed so the first largest coefficient is real positive.
    """
    space = list(space)
    d = len(space)
    if g.degree != d - 1:
        raise DimensionError(f"g has degree {g.degree}, space has degree-{d - 1} forms")
    Q = np.stack([p.coeffs for p in space], axis=1)  # (n, d)
    Q, _ = np.linalg.qr(Q)
    gv = g.coeffs
    gnorm = np.linalg.norm(gv)
    if gnorm == 0:
        raise NotInSpan("g is the zero polynomial")
    w = Q.conj().T @ gv
    residual = np.linalg.norm(gv - Q @ w) / gnorm
    if residual > tol:
        raise NotInSpan(f"g is not in the vanishing space (relative residual {residual:.3g})")
    complement = numerics.nullspace(w.conj()[None, :], tol=1e-12)
    if complement.shape[1] != d - 1:
        raise DimensionError("could not complete g to a basis")
    extra = [
        HomogeneousPoly(d - 1, _fix_phase(Q @ complement[:, k]) * gnorm) for k in range(d - 1)
    ]
    return VanishingBasis(d, (g, *extra))


# linear system ----------------------------------------------------------

_PARAM_CACHE: dict[int, np.ndarray] = {}


def hermitian_parameter_map(d: int) -> np.ndarray:
    """Complex ``(3 d^2, 3 d^2)`` map from real parameters to matrix entries.

    Per matrix the parameters are the d real diagonal entries followed by
    (Re, Im) of each strictly-upper entry in row-major order; entry (i, j)
    with i > j is the conjugate of (j, i).
    """
    if d in _PARAM_CACHE:
        return _PARAM_CACHE[d]
    n = d * d
    P = np.zeros((3 * n, 3 * n), dtype=complex)
    for m in range(3):
        r = m * n
        for i in range(d):
            P[m * n + i * d + i, r] = 1.0
            r += 1
        for i in range(d):
            for j in range(i + 1, d):
                P[m * n + i * d + j, r] = 1.0
                P[m * n + j * d + i, r] = 1.0
                P[m * n + i * d + j, r + 1] = 1j
                P[m * n + j * d + i, r + 1] = -1j
                r += 2
    P.flags.writeable = False
    _PARAM_CACHE[d] = P
    return P


def pencil_to_params(pencil: HermitianPencil) -> np.ndarray:
    d = pencil.d
    out = []
    for M in pencil.matrices:
        out.extend(np.diagonal(M).real)
        for i in range(d):
            for j in range(i + 1, d):
                out.extend((M[i, j].real, M[i, j].imag))
    return np.array(out)


def assemble_system(a: VanishingBasis, f: HomogeneousPoly) -> LinearSystem:
    """Coefficient-match ``a M = (f, 0..0)`` and ``M conj(a)^T = (f, 0..0)^T``.

    Complex rows are ordered (block, entry k, monomial mu); the real system
    stacks all real parts over all imaginary parts.
    """
    d = a.d
    if f.degree != d:
        raise DimensionError(f"f has degree {f.degree}, basis is for d={d}")
    nd = num_monomials(d)
    shift = shift_table(d - 1)  # (3, n_{d-1})
    C = a.coefficient_matrix()  # (d, n_{d-1})
    # K[block, k, mu, m, i, j]: coefficient of entry (m, i, j) of the pencil
    K = np.zeros((2, d, nd, 3, d, d), dtype=complex)
    for m in range(3):
        mu = shift[m]
        for k in range(d):
            # (a M)_k = sum_i a_i M_ik
            K[0, k, mu, m, :, k] = C.T
            # (M conj(a)^T)_k = sum_j M_kj conj(a_j)
            K[1, k, mu, m, k, :] = C.conj().T
    rows = K.reshape(2 * d * nd, 3 * d * d) @ hermitian_parameter_map(d)
    rhs = np.zeros((2, d, nd), dtype=complex)
    rhs[:, 0, :] = f.coeffs
    rhs = rhs.reshape(-1)
    A = np.vstack([rows.real, rows.imag])
    b = np.concatenate([rhs.real, rhs.imag])
    system = LinearSystem(d, A, b, rows, rhs)
    mismatch = system.redundancy_mismatch()
    if mismatch > 1e-14 * max(1.0, float(np.max(np.abs(C)))):
        raise AssertionError(f"conjugate blocks of the system disagree by {mismatch:.3g}")
    return system


# solve ------------------------------------------------------------------

def solve_system(system: LinearSystem, tau_res: float = TAU_RES):
    """Least-squares solve; returns ``(pencil, lsq)``."""
    lsq = numerics.least_squares(system.A, system.b)
    d = system.d
    if lsq.rank < 3 * d * d:
        raise RankDeficient(f"system rank {lsq.rank} < {3 * d * d}: solution not unique")
    bnorm = float(np.linalg.norm(system.b))
    if lsq.residual_norm > tau_res * bnorm:
        raise LargeResidual(
            f"least-squares residual {lsq.residual_norm:.3g} exceeds {tau_res:g} * |b| = {tau_res * bnorm:.3g}"
        )
    return HermitianPencil.from_params(lsq.x, d), lsq


def scale_constant(pencil: HermitianPencil, f: HomogeneousPoly, e) -> float:
    """``c = f(e) / det M(e)``; must be positive."""
    det = numerics.det_numeric(pencil.evaluate(np.asarray(e, dtype=float)))
    fe = f.evaluate(np.asarray(e, dtype=float)).real
    if det == 0:
        raise NonPositiveScale("pencil is singular at e")
    c = fe / complex(det).real
    if not c > 0:
        raise NonPositiveScale(f"scale constant c = {c:.6g} is not positive")
    return float(c)


def normalize_representation(rep: Representation) -> HermitianPencil:
    """Pencil scaled by ``c^(1/d)`` so that its determinant is f itself."""
    if not rep.c > 0:
        raise NonPositiveScale("c must be positive")
    if rep.c == 1.0:
        return rep.pencil
    return rep.pencil.scaled(rep.c ** (1.0 / rep.d))


# pipeline ----------------------------------------------------------------

@dataclass
class RepresentOptions:
    """Knobs for :func:`represent`.

    ``interlacer``, ``points``/``S_indices`` and ``basis`` replace the stage
    that would otherwise compute them.  Supplied points or bases are trusted:
    transversality is not checked and a warning is recorded instead.

    With ``balance`` (default) a computed basis is rescaled after the first
    solve: multiplying ``a_12..a_1d`` by ``lam`` multiplies c by
    ``lam^(2(d-1))``, so one re-solve brings c to 1.  Supplied bases are
    never rescaled.
    """

    interlacer: HomogeneousPoly | None = None
    points: list[ProjectivePoint] | None = None
    S_indices: list[int] | None = None
    basis: list[HomogeneousPoly] | None = None
    seed: int = 0
    max_retries: int = 3
    perturb_magnitude: float = 1e-3
    check_hyperbolic: bool = True
    hyperbolicity_trials: int = 50
    nullspace_tol: float = numerics.NULLSPACE_TOL
    span_tol: float = SPAN_TOL
    tau_res: float = TAU_RES
    balance: bool = True
    intersect: IntersectOptions = field(default_factory=IntersectOptions)


def _as_direction(e) -> tuple[float, float, float]:
    e = tuple(float(v) for v in np.asarray(e, dtype=float).reshape(3))
    if not any(e):
        raise InputError("direction e must be nonzero")
    return e


def represent(f: HomogeneousPoly, e=(1.0, 0.0, 0.0), options: RepresentOptions | None = None) -> Representation:
    """Definite Hermitian determinantal representation ``f = c det(x M1 + y M2 + z M3)``."""
    from .verify import hyperbolicity_check

    opts = options or RepresentOptions()
    e = _as_direction(e)
    if not f.is_real():
        raise InputError("f must have real coefficients")
    if f.degree < 1:
        raise InputError("f must have degree at least 1")
    f = HomogeneousPoly(f.degree, f.coeffs.real)
    d = f.degree
    fe = f.evaluate(np.array(e)).real
    if not fe > 0:
        raise InputError(f"f(e) = {fe:.6g} must be positive")
    timings: dict[str, float] = {}
    t_start = time.perf_counter()
    if opts.check_hyperbolic:
        hyp = hyperbolicity_check(f, e, trials=opts.hyperbolicity_trials, seed=opts.seed)
        if not hyp:
            raise NotHyperbolic(
                f"f is not hyperbolic with respect to e (imaginary part {hyp.worst_imag:.3g})"
            )

    warnings: list[str] = []
    inter: IntersectionSet | None = None
    retries = 0
    used = e
    if opts.basis is not None:
        basis = VanishingBasis(d, tuple(opts.basis))
        warnings.append("user-supplied basis: intersection and transversality not checked")
        if opts.points is not None:
            S = _supplied_S(opts)
            res = basis.vanishing_residual(S)
            if res > VANISH_TOL:
                warnings.append(f"supplied basis does not vanish on S (residual {res:.3g})")
    else:
        g = opts.interlacer if opts.interlacer is not None else directional_derivative(f, e)
        if g.degree != d - 1:
            raise InputError(f"interlacer must have degree {d - 1}")
        if opts.points is not None:
            S = _supplied_S(opts)
            warnings.append("user-supplied points: transversality not checked")
        else:
            t0 = time.perf_counter()
            while True:
                try:
                    inter = _intersection(f, g, used, opts, seed=opts.seed + retries)
                    break
                except TransversalityFailure as exc:
                    if opts.interlacer is not None or retries >= opts.max_retries:
                        raise TransversalityFailure(f"{exc} (after {retries} retries)") from exc
                    retries += 1
                    used = perturb_direction(e, seed=opts.seed + retries, magnitude=opts.perturb_magnitude)
                    g = directional_derivative(f, used)
                    log.info("retry %d with perturbed direction %s", retries, used)
            timings["intersection"] = time.perf_counter() - t0
            S = inter.S_points
        space = vanishing_space(S, d, opts.nullspace_tol)
        basis = extend_to_basis(g, space, opts.span_tol)

    system = assemble_system(basis, f)
    pencil, lsq = solve_system(system, opts.tau_res)
    c = scale_constant(pencil, f, e)
    if opts.balance and opts.basis is None and d > 1:
        lam = c ** (-1.0 / (2 * (d - 1)))
        basis = VanishingBasis(d, (basis.entries[0], *(lam * a for a in basis.entries[1:])))
        pencil, lsq = solve_system(assemble_system(basis, f), opts.tau_res)
        c = scale_constant(pencil, f, e)
    ok, lam = numerics.is_positive_definite(pencil.evaluate(np.array(e)))
    if not ok:
        raise IndefiniteOutput(f"pencil is not positive definite at e (min eigenvalue {lam:.3g})")
    timings["total"] = time.perf_counter() - t_start
    return Representation(
        pencil=pencil,
        c=c,
        lsq=lsq,
        basis=basis,
        direction=used,
        target_direction=e,
        intersection=inter,
        retries=retries,
        warnings=warnings,
        timings=timings,
        min_eigenvalue=lam,
    )


def _supplied_S(opts: RepresentOptions) -> list[ProjectivePoint]:
    points = list(opts.points)
    if opts.S_indices is not None:
        return [points[i] for i in opts.S_indices]
    return split_conjugate(points, options=opts.intersect).S_points


def _intersection(f, g, e, opts: RepresentOptions, seed) -> IntersectionSet:
    points = intersect_curves(f, g, seed=seed, options=opts.intersect)
    report = check_transverse(f, g, points, opts.intersect)
    if not report.passed:
        raise TransversalityFailure("; ".join(report.failures()))
    return split_conjugate(points, options=opts.intersect, report=report, direction=e)


# JSON ---------------------------------------------------------------------

def _matrix_to_json(M):
    return [[[float(v.real), float(v.imag)] for v in row] for row in M]


def _matrix_from_json(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def representation_to_dict(rep: Representation, error_report=None) -> dict:
    diagnostics = {
        "residual": rep.lsq.residual_norm,
        "rank": rep.lsq.rank,
        "min_singular_value": rep.lsq.smallest_singular_value,
        "retries": rep.retries,
        "direction": list(rep.direction),
        "min_eigenvalue": rep.min_eigenvalue,
        "warnings": list(rep.warnings),
    }
    if rep.intersection is not None and rep.intersection.report is not None:
        report = rep.intersection.report
        diagnostics["intersection"] = {
            "points": report.count,
            "min_distance": report.min_distance,
            "max_newton_residual": report.max_residual,
            "min_jacobian_sigma": report.min_jacobian_sigma,
        }
    if error_report is not None:
        diagnostics["error"] = error_report.to_dict()
    return {
        "d": rep.d,
        "c": rep.c,
        "e": list(rep.target_direction),
        "M1": _matrix_to_json(rep.pencil.M1),
        "M2": _matrix_to_json(rep.pencil.M2),
        "M3": _matrix_to_json(rep.pencil.M3),
        "diagnostics": diagnostics,
    }


def pencil_from_dict(data: dict) -> HermitianPencil:
    return HermitianPencil(*(_matrix_from_json(data[k]) for k in ("M1", "M2", "M3")))


def load_representation(path) -> tuple[HermitianPencil, float, dict]:
    """Read a representation file; returns ``(pencil, c, raw dict)``."""
    with open(path) as fh:
        data = json.load(fh)
    pencil = pencil_from_dict(data)
    if pencil.d != int(data["d"]):
        raise DimensionError("matrix size does not match 'd'")
    return pencil, float(data["c"]), data

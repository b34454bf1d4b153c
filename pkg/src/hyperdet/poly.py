"""Homogeneous trivariate polynomials with dense complex coefficients.

Monomials x^i y^j z^k of degree d are stored in descending lexicographic
order of (i, j, k): x^d first, z^d last.  For d = 2 the order is
x^2, xy, xz, y^2, yz, z^2.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegreeError, NonHomogeneousError, PolynomialParseError

TAU_REAL = 1e-12

VARIABLES = "xyz"


def num_monomials(d: int) -> int:
    return (d + 2) * (d + 1) // 2


def monomial_index(exp, d: int) -> int:
    """Position of ``exp = (i, j, k)`` among degree-``d`` monomials."""
    i, j, k = (int(v) for v in exp)
    if min(i, j, k) < 0 or i + j + k != d:
        raise DegreeError(f"exponent {tuple(exp)} does not have degree {d}")
    return (d - i) * (d - i + 1) // 2 + (d - i - j)


@lru_cache(maxsize=None)
def _exponents(d: int) -> np.ndarray:
    exps = [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]
    out = np.array(exps, dtype=np.int64).reshape(-1, 3)
    out.flags.writeable = False
    return out


def exponents(d: int) -> np.ndarray:
    """Read-only ``(binom(d+2, 2), 3)`` array of exponents in storage order."""
    if d < 0:
        raise DegreeError("degree must be non-negative")
    return _exponents(d)


@lru_cache(maxsize=None)
def _shift_table(d: int) -> np.ndarray:
    # shift[m, n] = index in degree d+1 of (monomial n of degree d) * (variable m)
    exps = _exponents(d)
    table = np.empty((3, len(exps)), dtype=np.int64)
    for m in range(3):
        bumped = exps.copy()
        bumped[:, m] += 1
        i, j = bumped[:, 0], bumped[:, 1]
        table[m] = (d + 1 - i) * (d + 2 - i) // 2 + (d + 1 - i - j)
    table.flags.writeable = False
    return table


def shift_table(d: int) -> np.ndarray:
    """``shift[m, n]``: degree-(d+1) index of monomial ``n`` times variable ``m``."""
    return _shift_table(d)


def monomial_values(d: int, points) -> np.ndarray:
    """Evaluate every degree-``d`` monomial at ``points`` (shape ``(..., 3)``).

    Returns an array of shape ``(..., binom(d+2, 2))``.
    """
    pts = np.asarray(points)
    if not np.iscomplexobj(pts):
        pts = pts.astype(float)
    exps = exponents(d)
    powers = pts[..., :, None] ** np.arange(d + 1)  # (..., 3, d+1)
    return (
        powers[..., 0, exps[:, 0]]
        * powers[..., 1, exps[:, 1]]
        * powers[..., 2, exps[:, 2]]
    )


@dataclass(frozen=True, eq=False)
class HomogeneousPoly:
    """A homogeneous polynomial in x, y, z of fixed degree.

    Coefficients are always held as a read-only complex vector, even when
    the polynomial is real.
    """

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        d = int(self.degree)
        if d < 0:
            raise DegreeError("degree must be non-negative")
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != num_monomials(d):
            raise DegreeError(
                f"degree {d} needs {num_monomials(d)} coefficients, got {c.shape[0]}"
            )
        c.flags.writeable = False
        object.__setattr__(self, "degree", d)
        object.__setattr__(self, "coeffs", c)

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> HomogeneousPoly:
        return cls(d, np.zeros(num_monomials(d), dtype=complex))

    @classmethod
    def monomial(cls, exp, coeff=1.0) -> HomogeneousPoly:
        d = int(sum(exp))
        c = np.zeros(num_monomials(d), dtype=complex)
        c[monomial_index(exp, d)] = coeff
        return cls(d, c)

    @classmethod
    def linear(cls, a, b, c) -> HomogeneousPoly:
        return cls(1, [a, b, c])

    @classmethod
    def from_terms(cls, d: int, terms) -> HomogeneousPoly:
        """Build from ``{(i, j, k): coeff}`` or an iterable of pairs."""
        items = terms.items() if hasattr(terms, "items") else terms
        c = np.zeros(num_monomials(d), dtype=complex)
        for exp, value in items:
            c[monomial_index(exp, d)] += value
        return cls(d, c)

    # queries ------------------------------------------------------------

    @property
    def nterms(self) -> int:
        return self.coeffs.shape[0]

    def coeff(self, exp) -> complex:
        return complex(self.coeffs[monomial_index(exp, self.degree)])

    def is_real(self, tol: float = TAU_REAL) -> bool:
        """True iff every imaginary part is at most ``tol`` times the largest coefficient."""
        scale = max(float(np.max(np.abs(self.coeffs), initial=0.0)), 1.0)
        return bool(np.all(np.abs(self.coeffs.imag) <= tol * scale))

    def max_abs_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def terms(self):
        """Yield ``((i, j, k), coeff)`` for nonzero coefficients in storage order."""
        for exp, value in zip(exponents(self.degree), self.coeffs):
            if value != 0:
                yield tuple(int(v) for v in exp), complex(value)

    def allclose(self, other: HomogeneousPoly, rtol=1e-12, atol=0.0) -> bool:
        return self.degree == other.degree and bool(
            np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol)
        )

    # evaluation ---------------------------------------------------------

    def __call__(self, points):
        return self.evaluate(points)

    def evaluate(self, points):
        """Value at a point or a stack of points of shape ``(..., 3)``."""
        pts = np.asarray(points)
        vals = monomial_values(self.degree, pts) @ self.coeffs
        return complex(vals) if pts.ndim == 1 else vals

    def magnitude_bound(self, points):
        """``sum |c_mu| |p^mu|``, the natural scale for evaluation error at ``p``."""
        pts = np.abs(np.asarray(points))
        vals = monomial_values(self.degree, pts) @ np.abs(self.coeffs)
        return float(vals) if pts.ndim == 1 else vals

    # arithmetic ---------------------------------------------------------

    def _check_same_degree(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
        return None

    def __add__(self, other):
        bad = self._check_same_degree(other)
        if bad is NotImplemented:
            return bad
        return HomogeneousPoly(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        bad = self._check_same_degree(other)
        if bad is NotImplemented:
            return bad
        return HomogeneousPoly(self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return HomogeneousPoly(self.degree, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPoly):
            return multiply(self, other)
        if np.isscalar(other):
            return HomogeneousPoly(self.degree, self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return HomogeneousPoly(self.degree, self.coeffs / scalar)

    def __pow__(self, n: int):
        result = HomogeneousPoly(0, [1.0])
        for _ in range(int(n)):
            result = multiply(result, self)
        return result

    def conj(self) -> HomogeneousPoly:
        return conjugate_coeffs(self)

    def derivative(self, var: int) -> HomogeneousPoly:
        return partial(self, var)

    def __repr__(self):
        return f"HomogeneousPoly({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def multiply(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    d = p.degree + q.degree
    ep, eq = exponents(p.degree), exponents(q.degree)
    summed = ep[:, None, :] + eq[None, :, :]
    i, j = summed[..., 0], summed[..., 1]
    idx = (d - i) * (d - i + 1) // 2 + (d - i - j)
    out = np.zeros(num_monomials(d), dtype=complex)
    np.add.at(out, idx.ravel(), np.outer(p.coeffs, q.coeffs).ravel())
    return HomogeneousPoly(d, out)


def partial(p: HomogeneousPoly, var: int) -> HomogeneousPoly:
    """Partial derivative with respect to variable ``var`` (0=x, 1=y, 2=z)."""
    d = p.degree
    if d == 0:
        raise DegreeError("cannot differentiate a degree-0 polynomial")
    exps = exponents(d - 1)
    src = shift_table(d - 1)[var]
    factor = exps[:, var] + 1
    return HomogeneousPoly(d - 1, p.coeffs[src] * factor)


def gradient(p: HomogeneousPoly) -> tuple[HomogeneousPoly, HomogeneousPoly, HomogeneousPoly]:
    return tuple(partial(p, m) for m in range(3))


def directional_derivative(p: HomogeneousPoly, e) -> HomogeneousPoly:
    """``e1 df/dx + e2 df/dy + e3 df/dz``."""
    if p.degree == 0:
        raise DegreeError("cannot differentiate a degree-0 polynomial")
    e = np.asarray(e)
    out = HomogeneousPoly.zero(p.degree - 1)
    for m in range(3):
        if e[m] != 0:
            out = out + partial(p, m) * e[m]
    return out


def conjugate_coeffs(p: HomogeneousPoly) -> HomogeneousPoly:
    return HomogeneousPoly(p.degree, np.conj(p.coeffs))


def change_coords(p: HomogeneousPoly, T) -> HomogeneousPoly:
    """Return ``p o T``, i.e. the polynomial ``v -> p(T v)``."""
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3):
        raise ValueError("T must be 3x3")
    if abs(np.linalg.det(T)) <= 1e-14 * max(np.abs(T).max(), 1.0) ** 3:
        raise np.linalg.LinAlgError("coordinate change is singular")
    d = p.degree
    forms = [HomogeneousPoly.linear(*T[m]) for m in range(3)]
    powers = [[HomogeneousPoly(0, [1.0])] for _ in range(3)]
    for m in range(3):
        for _ in range(d):
            powers[m].append(multiply(powers[m][-1], forms[m]))
    out = np.zeros(num_monomials(d), dtype=complex)
    for (i, j, k), c in zip(exponents(d), p.coeffs):
        if c == 0:
            continue
        term = multiply(multiply(powers[0][i], powers[1][j]), powers[2][k])
        out += c * term.coeffs
    return HomogeneousPoly(d, out)


# text format ------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<var>[xyzi])|(?P<op>[-+*^]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def parse_polynomial(text: str) -> HomogeneousPoly:
    """Parse text such as ``"x^4 - 4x^2y^2 + y^4"``.

    Terms are products of numbers, the variables x, y, z and the imaginary
    unit ``i``, joined by ``+``/``-``.  ``*`` is optional.  All terms must have
    the same total degree.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialParseError("empty polynomial", 0)
    terms = []  # (exp, coeff, position)
    pos = 0
    n = len(tokens)
    while pos < n:
        sign = 1.0
        start = tokens[pos][2]
        while pos < n and tokens[pos][0] == "op" and tokens[pos][1] in "+-":
            if tokens[pos][1] == "-":
                sign = -sign
            pos += 1
        coeff = complex(sign)
        exp = [0, 0, 0]
        nfactors = 0
        while pos < n:
            kind, value, where = tokens[pos]
            if kind == "op" and value == "*":
                if nfactors == 0 or pos + 1 >= n or tokens[pos + 1][0] == "op":
                    raise PolynomialParseError("misplaced '*'", where)
                pos += 1
                continue
            if kind == "op":
                if value == "^":
                    raise PolynomialParseError("'^' must follow a variable", where)
                break
            if kind == "num":
                coeff *= float(value)
            elif value == "i":
                coeff *= 1j
            else:
                power = 1
                if pos + 1 < n and tokens[pos + 1][1] == "^":
                    if pos + 2 >= n or tokens[pos + 2][0] != "num" or not tokens[pos + 2][1].isdigit():
                        raise PolynomialParseError("exponent must be a non-negative integer", tokens[pos + 1][2])
                    power = int(tokens[pos + 2][1])
                    pos += 2
                exp[VARIABLES.index(value)] += power
            nfactors += 1
            pos += 1
        if nfactors == 0:
            where = tokens[pos][2] if pos < n else len(text)
            raise PolynomialParseError("expected a term", where)
        terms.append((tuple(exp), coeff, start))
    degree = sum(terms[0][0])
    for exp, _, where in terms:
        if sum(exp) != degree:
            raise NonHomogeneousError(
                f"term of degree {sum(exp)} in a polynomial of degree {degree}", where
            )
    return HomogeneousPoly.from_terms(degree, [(e, c) for e, c, _ in terms])


def _format_number(v: float) -> str:
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _format_monomial(exp) -> str:
    parts = []
    for var, power in zip(VARIABLES, exp):
        if power == 1:
            parts.append(var)
        elif power > 1:
            parts.append(f"{var}^{power}")
    return "".join(parts)


def format_polynomial(p: HomogeneousPoly) -> str:
    """Print in storage order; complex coefficients become a real and an ``i`` term."""
    pieces = []
    for exp, c in p.terms():
        mono = _format_monomial(exp)
        for value, unit in ((c.real, ""), (c.imag, "i")):
            if value == 0:
                continue
            sign = "-" if value < 0 else "+"
            mag = abs(value)
            if unit:
                body = ("" if mag == 1 else _format_number(mag)) + "i"
                body = body + ("*" + mono if mono else "")
            elif mag == 1 and mono:
                body = mono
            else:
                body = _format_number(mag) + mono
            pieces.append((sign, body))
    if not pieces:
        return "0" if p.degree == 0 else f"0*{_format_monomial((p.degree, 0, 0))}"
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# JSON format ------------------------------------------------------------

def poly_to_dict(p: HomogeneousPoly) -> dict:
    terms = []
    for exp, c in zip(exponents(p.degree), p.coeffs):
        if c != 0:
            terms.append({"exp": [int(v) for v in exp], "re": float(c.real), "im": float(c.imag)})
    return {"degree": p.degree, "terms": terms}


def poly_from_dict(data: dict) -> HomogeneousPoly:
    d = int(data["degree"])
    c = np.zeros(num_monomials(d), dtype=complex)
    for term in data.get("terms", []):
        c[monomial_index(term["exp"], d)] += complex(term.get("re", 0.0), term.get("im", 0.0))
    return HomogeneousPoly(d, c)


def load_polynomial(path) -> HomogeneousPoly:
    with open(path) as fh:
        return poly_from_dict(json.load(fh))

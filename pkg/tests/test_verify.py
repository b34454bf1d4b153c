import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperdet.detrep import HermitianPencil, RepresentOptions, represent
from hyperdet.errors import DegreeError, NotHermitian
from hyperdet.generate import generate_random_hyperbolic, random_generator_pencil
from hyperdet.poly import HomogeneousPoly, directional_derivative, multiply, parse_polynomial
from hyperdet.verify import (
    check_definite,
    coefficient_error,
    fit_determinant,
    hyperbolicity_check,
    interlacing_check,
    interpolate_determinant,
    line_roots,
    representation_error,
    restrict_to_line,
)

from example_data import conic, quartic, quartic_golden_pencil


def test_interpolate_known_determinant():
    # det(xI + y diag(1,2) + z diag(3,4)) = (x + y + 3z)(x + 2y + 4z)
    P = HermitianPencil(np.eye(2), np.diag([1.0, 2.0]), np.diag([3.0, 4.0]))
    expected = multiply(parse_polynomial("x + y + 3z"), parse_polynomial("x + 2y + 4z"))
    assert interpolate_determinant(P).allclose(expected, atol=1e-13)


def test_interpolate_example_quartic():
    fit = fit_determinant(quartic_golden_pencil())
    assert np.max(np.abs(fit.poly.coeffs - quartic().coeffs / 256)) <= 1e-12
    assert fit.sample_count == 30
    assert fit.residual < 1e-12


def test_fit_rejects_non_hermitian():
    P = HermitianPencil(np.eye(2), np.diag([1j, 0]), np.zeros((2, 2)))
    with pytest.raises(NotHermitian):
        fit_determinant(P)


def test_coefficient_error_examples():
    err = coefficient_error(quartic(), quartic_golden_pencil(), 256.0)
    assert err.abs_error < 1e-11
    assert err.rel_error == pytest.approx(err.abs_error)
    bad = coefficient_error(quartic(), quartic_golden_pencil(), 255.0)
    assert bad.rel_error == pytest.approx(1 / 256, rel=1e-6)
    with pytest.raises(DegreeError):
        coefficient_error(conic(), quartic_golden_pencil(), 1.0)
    assert set(err.to_dict()) == {"abs_error", "rel_error", "c_used", "sample_count", "fit_residual"}


def test_restrict_to_line_oracle():
    f = quartic()
    e, p = np.array([1.0, 0.2, -0.1]), np.array([0.3, 1.0, 0.5])
    coeffs = restrict_to_line(f, e, p)
    for t in (-1.3, 0.0, 0.7, 2.0):
        assert np.polyval(coeffs, t) == pytest.approx(f.evaluate(t * e + p), abs=1e-12)


def test_line_roots_are_actual_roots():
    f = generate_random_hyperbolic(6, seed=1)
    e = np.array([1.0, 0, 0])
    p = np.array([0.2, 1.0, -0.7])
    roots = line_roots(f, e, p)[0]
    assert len(roots) == 6
    vals = [f.evaluate(t * e + p) for t in roots]
    assert np.max(np.abs(vals)) < 1e-8 * f.max_abs_coeff() * (1 + np.max(np.abs(roots))) ** 6


def test_hyperbolicity_examples():
    assert hyperbolicity_check(conic(), (1, 0, 0))
    assert hyperbolicity_check(quartic(), (1, 0, 0))
    res = hyperbolicity_check(parse_polynomial("x^2 + y^2 + z^2"), (1, 0, 0))
    assert not res
    assert res.witness is not None
    assert res.worst_imag > 0.1


@pytest.mark.parametrize("d", range(2, 9))
def test_generated_instances(d):
    f = generate_random_hyperbolic(d, seed=d)
    assert f.is_real()
    assert abs(f.coeff((d, 0, 0)) - 1) <= 1e-10
    assert hyperbolicity_check(f, (1, 0, 0), seed=d)
    assert interlacing_check(f, directional_derivative(f, (1, 0, 0)), (1, 0, 0), seed=d)


def test_generator_degree_one():
    P = random_generator_pencil(1, seed=5)
    b, c = P.M2[0, 0] / 2, P.M3[0, 0] / 2
    f = generate_random_hyperbolic(1, seed=5)
    assert f.allclose(HomogeneousPoly(1, [1, 2 * b, 2 * c]), atol=1e-14)


def test_generator_reproducible():
    a = generate_random_hyperbolic(5, seed=17)
    assert np.array_equal(a.coeffs, generate_random_hyperbolic(5, seed=17).coeffs)
    assert not np.array_equal(a.coeffs, generate_random_hyperbolic(5, seed=18).coeffs)


def test_interlacing_failures():
    f = parse_polynomial("x^2 - y^2 - z^2")
    assert interlacing_check(f, parse_polynomial("x"), (1, 0, 0))
    # a linear form whose root leaves the interval between the roots of f
    assert not interlacing_check(f, parse_polynomial("x - 3y - 3z"), (1, 0, 0))
    with pytest.raises(DegreeError):
        interlacing_check(f, f, (1, 0, 0))


def test_interlacing_explicit_points():
    f = quartic()
    g = directional_derivative(f, (1, 0, 0))
    assert interlacing_check(f, g, (1, 0, 0), points=[[0, 0.3, 1.0], [0.1, -2, 0.5]])


def test_check_definite():
    rep = represent(conic())
    assert check_definite(rep, (1, 0, 0))
    assert not check_definite(-rep.pencil, (1, 0, 0))


def test_representation_error_matches_coefficient_error():
    f = generate_random_hyperbolic(4, seed=0)
    rep = represent(f, options=RepresentOptions(seed=0))
    a = representation_error(f, rep)
    b = coefficient_error(f, rep.pencil, rep.c)
    assert a == b
    assert a.rel_error < 1e-12


NON_HYPERBOLIC = ("x^2 + y^2 + z^2", "x^2 + y^2 - z^2", "x^3 - x*y^2 + y^3 + z^3")


@settings(max_examples=20, deadline=None)
@given(
    s=st.floats(0.1, 10.0),
    t=st.floats(0.1, 10.0),
    pick=st.integers(-3, 20),
)
def test_hyperbolicity_invariant_under_positive_scaling(s, t, pick):
    f = parse_polynomial(NON_HYPERBOLIC[pick]) if pick < 0 else generate_random_hyperbolic(3, seed=pick)
    e = np.array([1.0, 0.0, 0.0])
    expected = pick >= 0
    assert bool(hyperbolicity_check(f, e)) == expected
    assert bool(hyperbolicity_check(f * s, t * e)) == expected

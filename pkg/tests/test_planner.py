from fractions import Fraction

import numpy as np
import pytest

from nullflat.errors import DegenerateInterval, ValidationError
from nullflat.flat import invert_curve
from nullflat.planner import (
    BoundaryProblem,
    cubic_hermite,
    endpoint_matrix_r21,
    endpoint_matrix_r22,
    plan,
    quintic_hermite,
    sample_plan,
)
from nullflat.geometry import basis_u_r21, basis_uv_r22


def test_endpoint_matrices_match_reference_curves():
    U = basis_u_r21(1.0, 2)
    M = np.column_stack([U.derivative(2), -U.derivative(1), U.derivative(0)])
    assert np.array_equal(M, endpoint_matrix_r21())
    A, B = basis_uv_r22(1.0, 1)
    M = np.column_stack([A.derivative(0), -A.derivative(1), B.derivative(0), -B.derivative(1)])
    assert np.array_equal(M, endpoint_matrix_r22())
    assert np.linalg.det(endpoint_matrix_r21()) == pytest.approx(8)
    assert np.linalg.det(endpoint_matrix_r22()) == pytest.approx(-4)


def test_hermite_bases():
    c = quintic_hermite(2, -1, 3)
    p = np.polynomial.Polynomial([float(x) for x in c])
    assert [p(0), p.deriv()(0), p.deriv(2)(0)] == [0, 0, 0]
    assert np.allclose([p(1), p.deriv()(1), p.deriv(2)(1)], [2, -1, 3])
    c = cubic_hermite(Fraction(1, 3), 2)
    p = np.polynomial.Polynomial([float(x) for x in c])
    assert np.allclose([p(0), p.deriv()(0), p(1), p.deriv()(1)], [0, 0, 1 / 3, 2])


def test_plan_r21_examples():
    r = plan(BoundaryProblem("r21", (0, 0, 0), (-2, 0, 2)))
    assert r.f.terms[0].coeffs == (0, 0, 0, 10, -15, 6)
    r = plan(BoundaryProblem("r21", (0, 0, 0), (0, 2, 2)))
    assert r.f.terms[0].coeffs == (0, 0, 0, Fraction(1, 2), -1, Fraction(1, 2))
    r = plan(BoundaryProblem("r21", (1, -2, 3), (1, -2, 3)))
    assert all(c == 0 for c in r.f.terms[0].coeffs)
    assert np.allclose(r.curve.x, [1, -2, 3])


def test_plan_r22_examples():
    r = plan(BoundaryProblem("r22", (0, 0, 0, 0), (1, 1, 1, -1)))
    f, g = r.f.terms[0].coeffs, r.g.terms[0].coeffs
    # jets (f'(1), f(1), g'(1), g(1)) = (1, 0, 0, 0)
    assert (sum(k * c for k, c in enumerate(f)), sum(f), sum(g)) == (1, 0, 0)
    assert all(c == 0 for c in g)
    r = plan(BoundaryProblem("r22", (0, 0, 0, 0), (-1, 1, 1, 1)))
    assert all(c == 0 for c in r.f.terms[0].coeffs)
    g = r.g.terms[0].coeffs
    assert sum(k * c for k, c in enumerate(g)) == 1 and sum(g) == 0
    r = plan(BoundaryProblem("r22", (2, 2, 2, 2), (2, 2, 2, 2)))
    assert all(c == 0 for c in r.f.terms[0].coeffs + r.g.terms[0].coeffs)


def test_plan_on_shifted_interval(rng):
    for space, m in (("r21", 3), ("r22", 4)):
        A, B = rng.uniform(-10, 10, m), rng.uniform(-10, 10, m)
        r = plan(BoundaryProblem(space, A, B, (-3.0, 4.5)), samples=57)
        assert max(r.endpoint_errors) <= 1e-9
        assert np.max(r.curve.scaled_residual()) <= 1e-10
        assert r.curve.tau[0] == -3.0 and r.curve.tau[-1] == 4.5


def test_plan_universality(rng):
    for space, m in (("r21", 3), ("r22", 4)):
        for _ in range(100):
            r = plan(BoundaryProblem(space, rng.uniform(-10, 10, m), rng.uniform(-10, 10, m)))
            assert max(r.endpoint_errors) <= 1e-9
            assert np.max(r.curve.scaled_residual()) <= 1e-10


def test_sample_plan():
    r = plan(BoundaryProblem("r21", (0, 0, 0), (-2, 0, 2)))
    c = sample_plan(r, 2)
    assert np.allclose(c.x, [[0, 0, 0], [-2, 0, 2]], atol=1e-12)
    c = sample_plan(r, 101)
    assert np.max(c.scaled_residual()) <= 1e-12
    with pytest.raises(ValidationError):
        sample_plan(r, 1)


def test_problem_validation():
    with pytest.raises(DegenerateInterval):
        BoundaryProblem("r21", (0, 0, 0), (1, 1, 1), (1, 1))
    with pytest.raises(ValidationError):
        BoundaryProblem("r21", (0, 0, 0), (1, 1, 1), (2, 1))
    with pytest.raises(ValidationError):
        BoundaryProblem("r21", (0, 0), (1, 1, 1))
    with pytest.raises(ValidationError):
        BoundaryProblem("r2n", (0, 0, 0), (1, 1, 1))


def test_inversion_along_plan_recovers_f(rng):
    A, B = rng.uniform(-10, 10, 3), rng.uniform(-10, 10, 3)
    r = plan(BoundaryProblem("r21", A, B, (0.0, 2.0)), samples=201)
    c = r.curve
    c.x = c.x - r.shift
    res = invert_curve(c, on_degenerate="nan")
    s = c.tau / 2.0
    ok = np.isfinite(res.tau_hat)
    assert ok.sum() > 190
    assert np.allclose(res.tau_hat[ok], s[ok], rtol=1e-9, atol=1e-9)
    assert np.allclose(res.f_hat[ok], r.f(s[ok]), rtol=1e-9, atol=1e-9)

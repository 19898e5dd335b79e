from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullflat.errors import IdenticallyDegenerate, ValidationError
from nullflat.geometry import Signature
from nullflat.oracle import (
    RatPoly,
    T,
    poly_expand_map,
    poly_invert_roundtrip,
    poly_null_residual,
    poly_tau_hat,
    r22_tau_consistency,
    solve_exact,
    typo_witness,
)

S21, S22 = Signature(2, 1), Signature(2, 2)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=50)
polys = st.lists(fracs, min_size=1, max_size=11).map(RatPoly)


def test_ratpoly_basics():
    p = RatPoly([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert RatPoly([0, 0]).is_zero() and RatPoly().degree == -1
    assert (T + 1) * (T - 1) == T**2 - 1
    assert (T**3).deriv() == 3 * T**2
    assert (T**2 + 1)(Fraction(1, 2)) == Fraction(5, 4)
    q, r = (T**3 + 2).divmod(T - 1)
    assert q * (T - 1) + r == T**3 + 2 and r == 3


@given(polys, polys, polys)
def test_ratpoly_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@given(polys, polys)
def test_exact_division(a, b):
    if not b.is_zero():
        assert (a * b).exact_div(b) == a


def test_expand_examples():
    assert poly_expand_map("r21", T**3) == [6 * T - 2 * T**3, 6 * T**2, 6 * T + 2 * T**3]
    assert poly_expand_map("r22", T**2) == [2 * T, T**2, 2 * T, -(T**2)]
    assert poly_expand_map("r22", RatPoly(), T**2) == [-(T**2), 2 * T, T**2, 2 * T]
    assert all(c.is_zero() for c in poly_expand_map("r21", RatPoly()))


def test_expand_delta_const():
    x = poly_expand_map("delta_const", T**3, delta=1)
    half = Fraction(1, 2)
    assert x == [6 * T - 2 * T**3 + half * (1 - T**2), 6 * T**2 + T, 6 * T + 2 * T**3 + half * (1 + T**2)]


def test_null_residual_examples():
    assert poly_null_residual([T, RatPoly(), T], S21).is_zero()
    assert poly_null_residual(poly_expand_map("delta_const", T**5 - T, delta=2), S21) == -4


@settings(max_examples=50)
@given(polys)
def test_r21_residual_vanishes(f):
    assert poly_null_residual(poly_expand_map("r21", f), S21).is_zero()


@settings(max_examples=50)
@given(polys, fracs)
def test_delta_residual_is_minus_delta_squared(f, d):
    assert poly_null_residual(poly_expand_map("delta_const", f, delta=d), S21) == -(d * d)


@settings(max_examples=50)
@given(polys, polys)
def test_r22_residual_vanishes(f, g):
    assert poly_null_residual(poly_expand_map("r22", f, g), S22).is_zero()


@settings(max_examples=50)
@given(polys, polys)
def test_literal_r22_residual_formula(f, g):
    # the printed map leaves 4 (F' G - F G') with F = f' - f, G = g' - g
    F, G = f.deriv() - f, g.deriv() - g
    assert typo_witness(f, g) == 4 * (F.deriv() * G - F * G.deriv())


def test_typo_witness():
    w = typo_witness()
    assert not w.is_zero()
    assert w == -24 * T**2 + 16 * T**3 - 4 * T**4
    assert typo_witness(T**2, RatPoly()).is_zero()
    # affine inputs: F = -t, G = 5 - 2t, so 4 (F' G - F G') = -20
    assert typo_witness(T + 1, 2 * T - 3) == -20
    assert typo_witness(T + 1, RatPoly()).is_zero()


def test_r2n_linear_extras():
    comps = poly_expand_map("r2n_linear_extras", T**4, extras=[RatPoly([1, 3]), RatPoly([0, 4])])
    assert len(comps) == 5
    assert comps[:3] == poly_expand_map("delta_const", T**4, delta=5)
    assert poly_null_residual(comps, Signature(2, 3)).is_zero()
    with pytest.raises(ValidationError):
        poly_expand_map("r2n_linear_extras", T, extras=[RatPoly([0, 1]), RatPoly([0, 1])])
    with pytest.raises(ValidationError):
        poly_expand_map("r2n_linear_extras", T, extras=[T**2])


def test_invert_roundtrip_examples():
    assert poly_invert_roundtrip("r21", T**3) == (2 * T**3, None)
    assert poly_invert_roundtrip("r22", T**2, T**3) == (T**2, T**3)
    assert poly_invert_roundtrip("r22", T**2, RatPoly()) == (T**2, RatPoly())
    with pytest.raises(IdenticallyDegenerate):
        poly_invert_roundtrip("r21", T**2)
    with pytest.raises(IdenticallyDegenerate):
        poly_invert_roundtrip("r22", T + 1, 2 * T)


@settings(max_examples=40)
@given(polys, fracs)
def test_r21_classical_formula_gives_twice_f(f, d):
    if f.degree < 3:
        return
    assert poly_invert_roundtrip("r21", f, delta=d)[0] == 2 * f
    assert poly_tau_hat("r21", f, delta=d) == T


@settings(max_examples=40)
@given(polys, polys)
def test_r22_inversion_and_tau_consistency(f, g):
    assert r22_tau_consistency(f, g).is_zero()
    if f.degree >= 2 or g.degree >= 2:
        assert poly_invert_roundtrip("r22", f, g) == (f, g)
        assert poly_tau_hat("r22", f, g) == T


def test_solve_exact():
    x = solve_exact([[1, 1, 1], [3, 4, 5], [6, 12, 20]], [0, 0, 1])
    assert x == [Fraction(1, 2), -1, Fraction(1, 2)]
    with pytest.raises(ZeroDivisionError):
        solve_exact([[1, 2], [2, 4]], [1, 1])

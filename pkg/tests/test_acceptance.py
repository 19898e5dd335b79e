"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with its headline
numbers. Run ``pytest tests/test_acceptance.py -v`` to see them inline.
"""

from fractions import Fraction

import numpy as np
import pytest

from nullflat.curves import CurveSpec
from nullflat.flat import FlatInputR21, FlatInputR22, generate, invert_curve
from nullflat.geometry import Signature, basis_u_r21, basis_uv_r22, jet_inner
from nullflat.jets import Jet
from nullflat.oracle import (
    RatPoly,
    poly_expand_map,
    poly_invert_roundtrip,
    poly_null_residual,
    typo_witness,
)
from nullflat.planner import BoundaryProblem, plan
from nullflat.verification import (
    delta_residual,
    fd_crosscheck,
    gauge_orbit_check,
    jacobian_det_r21,
    random_generic_spec,
    random_r21_input,
    random_r22_input,
    random_sigma,
    random_spec,
    rank_check,
    roundtrip_report,
    sqrt_relative_error,
    sum_of_squares_radicand,
)

SEED = 20261016


@pytest.fixture
def report(capsys):
    def emit(number, ok, summary):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary}")
        return ok
    return emit


def _rng(k):
    return np.random.default_rng(SEED + k)


def test_criterion_1_reference_constants(report):
    worst_abs, worst_scaled = 0.0, 0.0
    for tau in _rng(1).uniform(-10, 10, 100):
        U = basis_u_r21(tau, 3)
        u0, u1 = U.truncate(2), U.diff().truncate(2)
        A, B = (w.truncate(1) for w in basis_uv_r22(tau, 1))
        errs = [jet_inner(u0, u0).value, jet_inner(u0, u1).value, jet_inner(u1, u1).value + 4]
        errs += [p.value for p in (jet_inner(A, A), jet_inner(A, B), jet_inner(B, B),
                                   jet_inner(A.diff(), A.diff()), jet_inner(B.diff(), B.diff()),
                                   jet_inner(A.diff(), B.diff()))]
        e = float(max(abs(x) for x in errs))
        worst_abs = max(worst_abs, e)
        worst_scaled = max(worst_scaled, e / max(1.0, float(np.sum(U.value ** 2))))
    ok = worst_abs <= 1e-14
    report(1, ok, f"max |error| = {worst_abs:.3g} (bound 1e-14 absolute, tau in [-10,10]); "
                  f"scaled by |u|^2: {worst_scaled:.3g}")
    assert ok, "absolute 1e-14 is below the rounding floor of the float components at |tau| ~ 10"


def test_criterion_2_symbolic_null_identity(report):
    rng = _rng(2)

    def rpoly():
        deg = int(rng.integers(0, 11))
        return RatPoly(Fraction(int(rng.integers(-99, 100)), int(rng.integers(1, 30))) for _ in range(deg + 1))

    r21 = all(poly_null_residual(poly_expand_map("r21", rpoly()), Signature(2, 1)).is_zero() for _ in range(50))
    r22 = all(poly_null_residual(poly_expand_map("r22", rpoly(), rpoly()), Signature(2, 2)).is_zero()
              for _ in range(50))
    T = RatPoly.x()
    witness = typo_witness(T**2, T**3)
    ok = r21 and r22 and not witness.is_zero()
    report(2, ok, f"r21 50/50 zero: {r21}; r22 50/50 zero: {r22}; literal map residual = {witness}")
    assert ok


def test_criterion_3_numeric_null_identity(report):
    rng = _rng(3)
    worst = {"r21": 0.0, "delta": 0.0, "r2n": 0.0, "r22": 0.0}
    for i in range(100):
        kind = ("r21", "delta", "r2n", "r22")[i % 4]
        if kind == "delta":
            r = delta_residual(random_spec(rng), random_spec(rng, max_degree=4), np.linspace(-1.5, 1.5, 1000))
        else:
            if kind == "r22":
                inp = FlatInputR22(random_spec(rng), random_spec(rng))
            elif kind == "r2n":
                n = int(rng.integers(2, 5))
                inp = FlatInputR21(random_spec(rng),
                                   delta_extras=tuple(random_generic_spec(rng, 2, 5) for _ in range(n - 1)))
            else:
                inp = FlatInputR21(random_spec(rng))
            r = generate(inp, (-1.5, 1.5, 1000)).scaled_residual()
        worst[kind] = max(worst[kind], float(np.max(r)))
    ok = max(worst.values()) <= 1e-10
    report(3, ok, "max scaled residual " + ", ".join(f"{k} {v:.3g}" for k, v in worst.items()) + " (bound 1e-10)")
    assert ok


def test_criterion_4_roundtrip(report):
    rng = _rng(4)
    worst, skipped = 0.0, 0
    for i in range(40):
        kind = i % 3
        sigma = random_sigma(rng) if i % 2 else None
        if kind == 2:
            inp = random_r22_input(rng, sigma)
        else:
            inp = random_r21_input(rng, 1 if kind == 0 else int(rng.integers(2, 5)), sigma=sigma)
        rep = roundtrip_report(inp, (-1.5, 1.5, 500))
        worst = max(worst, rep.max_tau_error, rep.max_f_error, rep.max_g_error)
        skipped += rep.degenerate
    f = RatPoly([Fraction(1, 3), -2, 0, Fraction(5, 7), 1])
    classical, _ = poly_invert_roundtrip("r21", f)
    # the library halves the classical formula
    curve = generate(FlatInputR21(CurveSpec.poly(*f.coeffs)), (0.25, 1.25, 5))
    f_hat = invert_curve(curve).f_hat
    f_true = np.array([float(f(Fraction(t))) for t in curve.tau])
    normalized = float(np.max(np.abs(f_hat - f_true) / np.maximum(1, np.abs(f_true))))
    ok = worst <= 1e-9 and classical == 2 * f and normalized <= 1e-9
    report(4, ok, f"max relative error {worst:.3g} over 40 inputs ({skipped} degenerate samples skipped); "
                  f"classical formula = 2f: {classical == 2 * f}; normalized f error {normalized:.3g}")
    assert ok


def test_criterion_5_rank_facts(report):
    rng = _rng(5)
    dets = np.array([jacobian_det_r21(t) for t in rng.uniform(-10, 10, 100)])
    det_err = float(np.max(np.abs(dets - 8)))
    ranks = {n: rank_check("r21" if n == 1 else "r2n", float(rng.uniform(-1, 1)), 2, n=n).rank
             for n in (1, 2, 3, 4)}
    r22 = rank_check("r22", float(rng.uniform(-1, 1)), 1, n=2).rank
    ok = det_err <= 1e-10 and all(ranks[n] == n + 2 for n in ranks) and r22 == 4
    report(5, ok, f"max |det - 8| = {det_err:.3g}; 2-jet ranks {ranks}; r22 1-jet rank {r22}")
    assert ok


def _coeffs(spec):
    (term,) = spec.terms
    return [float(c) for c in term.coeffs]


def test_criterion_6_planner(report):
    rng = _rng(6)
    end_err, res = 0.0, 0.0
    for space, m in (("r21", 3), ("r22", 4)):
        for _ in range(100):
            r = plan(BoundaryProblem(space, rng.uniform(-10, 10, m), rng.uniform(-10, 10, m)))
            end_err = max(end_err, *r.endpoint_errors)
            res = max(res, float(np.max(r.curve.scaled_residual())))
    ex1 = _coeffs(plan(BoundaryProblem("r21", (0, 0, 0), (-2, 0, 2))).f)
    ex2 = _coeffs(plan(BoundaryProblem("r21", (1, 1, 1), (1, 3, 3))).f)
    c1 = float(np.max(np.abs(np.array(ex1) - [0, 0, 0, 10, -15, 6])))
    c2 = float(np.max(np.abs(np.array(ex2) - [0, 0, 0, 0.5, -1, 0.5])))
    ok = end_err <= 1e-9 and res <= 1e-10 and c1 <= 1e-12 and c2 <= 1e-12
    report(6, ok, f"200 plans: endpoint error {end_err:.3g}, scaled residual {res:.3g}; "
                  f"worked examples coefficient error {c1:.3g}, {c2:.3g}")
    assert ok


def test_criterion_7_jets(report):
    rng = _rng(7)
    specs = ["poly:0,0,0,1", "poly:1,-2,1/3,0,1/7", "sin:1,1", "sin:1/2,3", "cos:2,3/2",
             "exp:1/2,-1", "exp:1,1", "poly:1,1+sin:1,2+cos:1/3,1/2+exp:1/4,1/2"]
    fd = max(fd_crosscheck(CurveSpec.parse(s), t) for s in specs for t in rng.uniform(-2, 2, 5))
    sq = max(sqrt_relative_error(sum_of_squares_radicand(rng)) for _ in range(50))
    scaled = []
    for _ in range(50):
        c = rng.uniform(-1, 1, 6)
        c[0] = rng.uniform(0.5, 4)
        scaled.append(sqrt_relative_error(Jet(c)))
    sq = max(sq, *scaled)
    ok = fd <= 1e-6 and sq <= 1e-12
    report(7, ok, f"fd_crosscheck max {fd:.3g} (bound 1e-6); jet_sqrt squared relative error {sq:.3g} (bound 1e-12)")
    assert ok


def test_criterion_8_gauge(report):
    rng = _rng(8)
    worst_res, worst_tau, passed = 0.0, 0.0, 0
    for i in range(25):
        if i % 3 == 0:
            inp = random_r21_input(rng, 1)
        elif i % 3 == 1:
            inp = random_r21_input(rng, int(rng.integers(2, 5)))
        else:
            inp = random_r22_input(rng)
        rep = gauge_orbit_check(inp, random_sigma(rng), (-1.5, 1.5, 1000))
        passed += rep.passed
        worst_res = max(worst_res, rep.max_scaled_residual)
        worst_tau = max(worst_tau, rep.max_tau_error)
    ok = passed == 25
    report(8, ok, f"{passed}/25 pairs pass; scaled residual {worst_res:.3g}; tau_hat error {worst_tau:.3g}")
    assert ok

import numpy as np
import pytest

from nullflat.curves import CurveSpec
from nullflat.errors import SigmaNotMonotone
from nullflat.flat import FlatInputR21, FlatInputR22
from nullflat.verification import (
    gauge_orbit_check,
    jacobian_det_r21,
    random_r21_input,
    random_sigma,
    rank_check,
    run_suite,
)


def test_jacobian_det_examples(rng):
    assert jacobian_det_r21(0.0) == pytest.approx(8, abs=1e-12)
    assert jacobian_det_r21(1.0) == pytest.approx(8, abs=1e-12)
    for t in rng.uniform(-10, 10, 100):
        assert jacobian_det_r21(t) == pytest.approx(8, abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_two_jet_rank_is_n_plus_2(n, rng):
    space = "r21" if n == 1 else "r2n"
    for seed in range(10):
        rep = rank_check(space, float(rng.uniform(-1, 1)), 2, n=n, seed=seed)
        assert rep.rank == n + 2
        assert rep.rank <= min(rep.shape)


def test_r22_one_jet_rank_is_4(rng):
    for seed in range(10):
        assert rank_check("r22", float(rng.uniform(-2, 2)), 1, seed=seed).rank == 4


def test_one_jet_rank_r21_is_deficient():
    # with f'' frozen, x moves only in span(u'', u') under (s, f, f')
    rep = rank_check("r21", 0.3, 1)
    assert rep.rank == 2
    assert rep.singular_values[-1] < rep.threshold


def test_one_jet_rank_r2n_is_full():
    # the length element feeds the u direction through the extras' velocities,
    # so the 1-jet Jacobian is already onto for n >= 2
    for seed in range(5):
        assert rank_check("r2n", 0.3, 1, n=3, seed=seed).rank == 5


def test_rank_report_fields():
    rep = rank_check("r2n", 0.1, 2, n=3)
    d = rep.to_dict()
    assert d["rank"] == 5 and d["shape"] == [5, 10]
    assert d["threshold"] == pytest.approx(1e-8 * d["singular_values"][0])


def test_gauge_examples():
    rep = gauge_orbit_check(FlatInputR21("poly:0,0,0,1"), CurveSpec.parse("poly:0,2"), (0.5, 1.5, 11))
    assert rep.passed and rep.degenerate == 0
    rep = gauge_orbit_check(FlatInputR21("poly:0,0,0,1"), CurveSpec.parse("poly:0,-1"), (0.5, 1.5, 11))
    assert rep.max_scaled_residual < 1e-12 and rep.passed


def test_gauge_identity_equals_plain_roundtrip():
    from nullflat.verification import roundtrip_report
    inp = FlatInputR22("poly:0,1,0,1,1/2", "sin:1,1+poly:0,0,1")
    a = gauge_orbit_check(inp, CurveSpec.parse("poly:0,1"), (-1, 1, 101)).to_dict()
    b = roundtrip_report(inp, (-1, 1, 101)).to_dict()
    assert a == b


def test_gauge_random_pairs(rng):
    for i in range(25):
        inp = random_r21_input(rng, 1 + i % 4)
        rep = gauge_orbit_check(inp, random_sigma(rng), (-1.5, 1.5, 300))
        assert rep.passed, rep


def test_gauge_rejects_flat_sigma():
    with pytest.raises(SigmaNotMonotone):
        gauge_orbit_check(FlatInputR21("poly:0,0,0,1"), CurveSpec.parse("poly:0,0,1"), (-1, 1, 11))


def test_suite_report_shape():
    rep = run_suite("jets", seed=1)
    assert set(rep) == {"suite", "cases", "passed", "failed", "details"}
    assert rep["failed"] == 0 and rep["cases"] == len(rep["details"])
    with pytest.raises(KeyError):
        run_suite("nope")

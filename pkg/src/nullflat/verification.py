"""Property checks that tie the implementation back to the geometry.

Contains the Jacobian/rank diagnostics, the reparametrization (gauge) check,
the finite-difference cross-check of the jet layer, random input generators
and the suites behind ``nullflat verify``.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath
import numpy as np

from .curves import Cos, CurveSpec, Exp, Polynomial, Sin, jet_eval
from .errors import MathDegeneracy, SigmaNotMonotone
from .flat import (
    FlatInputR21,
    FlatInputR22,
    expected_outputs,
    generate,
    invert_curve,
)
from .geometry import basis_u_r21, basis_uv_r22

RESIDUAL_TOL = 1e-10
ROUNDTRIP_TOL = 1e-9
RANK_RTOL = 1e-8


def rel_err(a, b):
    """|a - b| / max(1, |b|), elementwise."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(1.0, np.abs(b))


def jacobian_det_r21(tau):
    """Determinant of the linear map (f, f', f'') -> x, columns u'', -u', u."""
    U = basis_u_r21(tau, 2)
    M = np.column_stack([U.derivative(2), -U.derivative(1), U.derivative(0)])
    return float(np.linalg.det(M))


@dataclass
class RankReport:
    space: str
    n: int
    tau: float
    jet_depth: int
    rank: int
    singular_values: np.ndarray
    threshold: float
    shape: tuple

    def to_dict(self):
        return {
            "space": self.space, "n": self.n, "tau": self.tau,
            "jet_depth": self.jet_depth, "rank": self.rank,
            "singular_values": [float(s) for s in self.singular_values],
            "threshold": self.threshold, "shape": list(self.shape),
        }


def _jet_values(spec, s, upto):
    return list(jet_eval(spec, s, upto).derivs)


def _point_map(space, n, depth, base):
    """Build x(params) for the rank probe and its base parameter vector.

    Parameters are the internal parameter s followed by the jets (to
    ``depth``) of every flat output at s. Higher derivatives the map needs
    are frozen at their base values.
    """
    s0 = base["s"]
    if space == "r22":
        fj, gj = base["f"], base["g"]
        p0 = [s0] + fj[: depth + 1] + gj[: depth + 1]

        def phi(p):
            s = p[0]
            f = list(p[1 : depth + 2]) + fj[depth + 1 :]
            g = list(p[depth + 2 : 2 * depth + 3]) + gj[depth + 1 :]
            U, V = basis_uv_r22(s, 1)
            return (U.derivative(0) * f[1] - U.derivative(1) * f[0]
                    + V.derivative(0) * g[1] - V.derivative(1) * g[0])

        return phi, np.array(p0)

    fj, ej = base["f"], base["extras"]
    p0 = [s0] + fj[: depth + 1]
    for e in ej:
        p0 += e[: depth + 1]

    def phi(p):
        s = p[0]
        f = list(p[1 : depth + 2]) + fj[depth + 1 :]
        U = basis_u_r21(s, 2)
        x = (U.derivative(0) * f[2] - U.derivative(1) * f[1] + U.derivative(2) * f[0])
        tail, vel = [], []
        k = depth + 2
        for e in ej:
            jets = list(p[k : k + depth + 1]) + e[depth + 1 :]
            tail.append(jets[0])
            vel.append(jets[1])
            k += depth + 1
        if vel:
            x = x + 0.5 * U.derivative(0) * np.sqrt(np.sum(np.square(vel)))
        return np.concatenate([x, tail])

    return phi, np.array(p0)


def _fd_jacobian(phi, p0):
    cols = []
    for i in range(len(p0)):
        h = 1e-6 * max(1.0, abs(p0[i]))
        e = np.zeros_like(p0)
        e[i] = h
        cols.append((phi(p0 + e) - phi(p0 - e)) / (2 * h))
    return np.column_stack(cols)


def rank_check(space, tau, jet_depth, n=None, inp=None, seed=0):
    """Numerical rank of d x / d(flat-output jets at tau, internal parameter).

    ``space`` is ``"r21"``, ``"r2n"`` (with ``n``) or ``"r22"``. The base
    point comes from ``inp`` or from a seeded generic random input.
    Rank threshold is ``1e-8`` times the largest singular value.
    """
    if space == "r21":
        n = 1
    elif space == "r22":
        n = 2
    elif n is None:
        raise ValueError("r2n rank check needs n")
    rng = np.random.default_rng(seed)
    if inp is None:
        inp = random_r22_input(rng) if space == "r22" else random_r21_input(rng, n, delta="generic")
    upto = max(jet_depth, 2) + 1
    base = {"s": float(tau), "f": _jet_values(inp.f, tau, upto)}
    if space == "r22":
        base["g"] = _jet_values(inp.g, tau, upto)
    else:
        base["extras"] = [_jet_values(e, tau, upto) for e in inp.delta_extras]
    phi, p0 = _point_map(space, n, jet_depth, base)
    J = _fd_jacobian(phi, p0)
    sv = np.linalg.svd(J, compute_uv=False)
    thr = RANK_RTOL * sv[0]
    return RankReport(space, n, float(tau), jet_depth, int(np.sum(sv > thr)), sv, float(thr), J.shape)


@dataclass
class GaugeReport:
    space: str
    max_scaled_residual: float
    max_tau_error: float
    max_f_error: float
    max_g_error: float
    degenerate: int
    samples: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (
            self.max_scaled_residual <= RESIDUAL_TOL
            and self.max_tau_error <= ROUNDTRIP_TOL
            and self.max_f_error <= ROUNDTRIP_TOL
            and self.max_g_error <= ROUNDTRIP_TOL
        )

    def to_dict(self):
        return dict(self.__dict__)


def roundtrip_report(inp, grid, eps_den=None, order=None):
    """Generate, invert and compare against the known flat outputs."""
    curve = generate(inp, grid, order=order)
    orientation = 1.0
    if inp.sigma is not None:
        orientation = np.sign(jet_eval(inp.sigma, curve.tau, 1)[1])
    res = invert_curve(curve, eps_den=eps_den, orientation=orientation, on_degenerate="nan")
    s, f, g = expected_outputs(inp, curve.tau)
    ok = np.isfinite(res.tau_hat)

    def worst(a, b):
        return float(np.max(rel_err(a[ok], b[ok]))) if np.any(ok) else 0.0

    return GaugeReport(
        inp.space,
        float(np.max(curve.scaled_residual())),
        worst(res.tau_hat, s),
        worst(res.f_hat, f),
        worst(res.g_hat, g) if g is not None else 0.0,
        int(np.sum(~ok)),
        len(curve),
    )


def gauge_orbit_check(inp, sigma, grid, eps_den=None):
    """Reparametrize ``inp`` by ``sigma`` and confirm nullity and tau_hat = sigma(tau)."""
    return roundtrip_report(replace(inp, sigma=sigma), grid, eps_den=eps_den)


_STENCILS = {
    1: ([1, -8, 0, 8, -1], 12),
    2: ([-1, 16, -30, 16, -1], 12),
    3: ([-1, 2, 0, -2, 1], 2),
}


def fd_crosscheck(spec, tau, max_order=3, step=1e-5, dps=50):
    """Largest relative gap between jet derivatives and central differences.

    The order-0 function is evaluated with ``dps`` decimal digits so the
    five-point stencils are limited by truncation error, not cancellation.
    """
    if not 1 <= max_order <= 3:
        raise ValueError("max_order must be 1, 2 or 3")
    jet = jet_eval(spec, tau, max_order)
    with mpmath.workdps(dps):
        t = mpmath.mpf(float(tau))
        h = mpmath.mpf(step)
        vals = [spec.mp_value(t + k * h) for k in (-2, -1, 0, 1, 2)]
        worst = 0.0
        for k in range(1, max_order + 1):
            w, d = _STENCILS[k]
            est = mpmath.fsum(c * v for c, v in zip(w, vals)) / (d * h**k)
            exact = float(jet[k])
            worst = max(worst, abs(float(est) - exact) / max(1.0, abs(exact)))
    return worst


# random inputs -------------------------------------------------------------

def _q(x):
    # short exact rational close to x, keeps generated specs readable
    return Fraction(x).limit_denominator(1000)


def random_spec(rng, max_degree=8, trig=True):
    """Polynomial of degree <= max_degree plus (optionally) one trig/exp term."""
    deg = int(rng.integers(0, max_degree + 1))
    terms = [Polynomial(tuple(_q(c) for c in rng.uniform(-1, 1, deg + 1)))]
    if trig:
        kind = rng.integers(0, 4)
        a, w = _q(rng.uniform(-1, 1)), _q(rng.uniform(0.5, 2.5))
        if kind == 1:
            terms.append(Sin(a, w))
        elif kind == 2:
            terms.append(Cos(a, w))
        elif kind == 3:
            terms.append(Exp(a, _q(rng.uniform(-1, 1))))
    return CurveSpec(tuple(terms))


def random_generic_spec(rng, min_degree=4, max_degree=8):
    """A spec whose high derivatives do not vanish identically."""
    deg = int(rng.integers(min_degree, max_degree + 1))
    c = rng.uniform(-1, 1, deg + 1)
    c[-1] = np.sign(c[-1]) * rng.uniform(0.5, 1.0)
    terms = [Polynomial(tuple(_q(x) for x in c)),
             Sin(_q(rng.uniform(0.2, 1)), _q(rng.uniform(0.5, 2)))]
    return CurveSpec(tuple(terms))


def random_sigma(rng, decreasing=None):
    """Strictly monotone reparametrization a + b t + c t^3 (+ small sine)."""
    sign = (-1 if rng.random() < 0.5 else 1) if decreasing is None else (-1 if decreasing else 1)
    b = rng.uniform(0.5, 2.0)
    c = rng.uniform(0.0, 0.5)
    eps = rng.uniform(0, 0.2) * b
    terms = [Polynomial((_q(rng.uniform(-0.5, 0.5)), _q(sign * b), 0, _q(sign * c))),
             Sin(_q(sign * eps), 1)]
    return CurveSpec(tuple(terms))


def random_r21_input(rng, n=1, delta="generic", sigma=None):
    f = random_generic_spec(rng) if delta == "generic" else random_spec(rng)
    extras = tuple(random_generic_spec(rng, 2, 5) for _ in range(n - 1))
    return FlatInputR21(f, sigma=sigma, delta_extras=extras)


def random_r22_input(rng, sigma=None):
    return FlatInputR22(random_generic_spec(rng, 3, 8), random_generic_spec(rng, 3, 8), sigma=sigma)


# suites behind the CLI -----------------------------------------------------

def _suite(name, checks):
    details = []
    for label, fn in checks:
        try:
            ok, info = fn()
        except MathDegeneracy as exc:
            ok, info = False, exc.to_dict()
        details.append({"case": label, "passed": bool(ok), "info": info})
    passed = sum(d["passed"] for d in details)
    return {"suite": name, "cases": len(details), "passed": passed,
            "failed": len(details) - passed, "details": details}


def _suite_reference(rng):
    from .geometry import jet_inner

    def case(tau):
        U = basis_u_r21(tau, 3)
        u0 = U.truncate(2)
        u1 = U.diff().truncate(2)
        uu, uu1, u1u1 = jet_inner(u0, u0).value, jet_inner(u0, u1).value, jet_inner(u1, u1).value
        A, B = basis_uv_r22(tau, 1)
        A, B = A.truncate(1), B.truncate(1)
        pairs = [jet_inner(A, A), jet_inner(A, B), jet_inner(B, B),
                 jet_inner(A.diff(), A.diff()), jet_inner(B.diff(), B.diff()),
                 jet_inner(A.diff(), B.diff())]
        worst = max(abs(uu), abs(uu1), abs(u1u1 + 4), max(abs(p.value) for p in pairs))
        # components carry rounding of size eps*tau^2, so the bound scales with |u|^2
        scale = max(1.0, float(np.sum(U.value ** 2)))
        return worst <= 1e-14 * scale, {"tau": tau, "max_error": worst, "scale": scale}

    return [(f"tau={t:.6g}", lambda t=t: case(t)) for t in rng.uniform(-10, 10, 100)]


def _suite_symbolic(rng):
    from .geometry import Signature
    from .oracle import RatPoly, poly_expand_map, poly_invert_roundtrip, poly_null_residual, typo_witness

    def rpoly(deg):
        return RatPoly(Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 20))) for _ in range(deg + 1))

    checks = []
    for i in range(50):
        f = rpoly(int(rng.integers(0, 11)))
        checks.append((f"r21 #{i}", lambda f=f: (
            poly_null_residual(poly_expand_map("r21", f), Signature(2, 1)).is_zero(), {"deg": f.degree})))
    for i in range(50):
        f, g = rpoly(int(rng.integers(0, 11))), rpoly(int(rng.integers(0, 11)))
        checks.append((f"r22 #{i}", lambda f=f, g=g: (
            poly_null_residual(poly_expand_map("r22", f, g), Signature(2, 2)).is_zero(), {})))
    checks.append(("typo witness nonzero", lambda: (not typo_witness().is_zero(), {"residual": str(typo_witness())})))
    T = RatPoly.x()
    checks.append(("r21 classical formula returns 2f", lambda: (
        poly_invert_roundtrip("r21", T**3)[0] == 2 * T**3, {})))
    return checks


def _suite_numeric(rng, count=1000):
    checks = []
    kinds = ["r21", "delta", "r2n", "r22"]
    for i in range(100):
        kind = kinds[i % 4]
        if kind == "r22":
            inp = FlatInputR22(random_spec(rng), random_spec(rng))
        elif kind == "r2n":
            n = int(rng.integers(2, 5))
            inp = FlatInputR21(random_spec(rng), delta_extras=tuple(random_generic_spec(rng, 2, 5) for _ in range(n - 1)))
        else:
            inp = FlatInputR21(random_spec(rng))
        if kind == "delta":
            checks.append((f"delta #{i}", lambda inp=inp: _delta_case(rng_child(rng), inp, count)))
        else:
            checks.append((f"{kind} #{i}", lambda inp=inp: _null_case(inp, count)))
    return checks


def rng_child(rng):
    return np.random.default_rng(int(rng.integers(0, 2**31)))


def _null_case(inp, count):
    curve = generate(inp, (-1.5, 1.5, count))
    worst = float(np.max(curve.scaled_residual()))
    return worst <= RESIDUAL_TOL, {"max_scaled_residual": worst, "space": inp.space}


def delta_residual(fspec, dspec, taus, order=3):
    """Scaled |(x', x') + Delta^2| for delta_map driven by explicit f and Delta specs."""
    from .flat import delta_map
    from .geometry import null_residual
    fj = jet_eval(fspec, taus, order + 2)
    dj = jet_eval(dspec, taus, order)
    germ = delta_map(fj, dj, taus)
    res = null_residual(germ).value + dj.value**2
    speed2 = np.sum(germ.derivative(1) ** 2, axis=0)
    return np.abs(res) / np.maximum(1.0, speed2)


def _delta_case(rng, inp, count):
    dspec = random_spec(rng, max_degree=4)
    worst = float(np.max(delta_residual(inp.f, dspec, np.linspace(-1.5, 1.5, count))))
    return worst <= RESIDUAL_TOL, {"max_scaled_residual": worst}


def _suite_roundtrip(rng):
    checks = []
    for i in range(40):
        kind = ("r21", "r2n", "r22", "r2n")[i % 4]
        sigma = random_sigma(rng, decreasing=False) if i % 3 == 0 else None
        if kind == "r22":
            inp = random_r22_input(rng, sigma)
        else:
            inp = random_r21_input(rng, 1 if kind == "r21" else int(rng.integers(2, 5)), sigma=sigma)
        checks.append((f"{kind} #{i}", lambda inp=inp: _gauge_case(inp)))
    return checks


def _gauge_case(inp, grid=(-1.5, 1.5, 1000)):
    rep = roundtrip_report(inp, grid)
    return rep.passed, rep.to_dict()


def _suite_rank(rng):
    checks = []
    for t in rng.uniform(-10, 10, 100):
        checks.append((f"det r21 tau={t:.6g}", lambda t=t: (
            abs(jacobian_det_r21(t) - 8) <= 1e-10, {"det": jacobian_det_r21(t)})))
    for n in (1, 2, 3, 4):
        space = "r21" if n == 1 else "r2n"
        for j in range(3):
            t = float(rng.uniform(-1, 1))
            checks.append((f"rank {space} n={n} depth 2 #{j}", lambda n=n, t=t, space=space, j=j: _rank_case(space, n, t, 2, n + 2, j)))
    for j in range(3):
        t = float(rng.uniform(-1, 1))
        checks.append((f"rank r22 depth 1 #{j}", lambda t=t, j=j: _rank_case("r22", 2, t, 1, 4, j)))
    return checks


def _rank_case(space, n, tau, depth, expected, seed):
    rep = rank_check(space, tau, depth, n=n, seed=seed)
    return rep.rank == expected, rep.to_dict()


def _suite_planner(rng):
    from .planner import BoundaryProblem, plan

    def case(space):
        m = 3 if space == "r21" else 4
        A, B = rng.uniform(-10, 10, m), rng.uniform(-10, 10, m)
        r = plan(BoundaryProblem(space, A, B, (0.0, 1.0)), samples=101)
        worst = float(np.max(r.curve.scaled_residual()))
        ok = max(r.endpoint_errors) <= 1e-9 and worst <= RESIDUAL_TOL
        return ok, {"endpoint_errors": list(r.endpoint_errors), "max_scaled_residual": worst}

    return [(f"{s} #{i}", lambda s=s: case(s)) for s in ("r21", "r22") for i in range(100)]


def _suite_jets(rng):
    from .jets import Jet, jet_sqrt
    specs = ["poly:0,0,0,1", "poly:5", "sin:1,1", "cos:2,3/2", "exp:1/2,-1",
             "poly:1,-2,1/3,0,1/7+sin:1/2,2", "exp:1,1+cos:1,1"]
    checks = []
    for text in specs:
        spec = CurveSpec.parse(text)
        for t in rng.uniform(-2, 2, 5):
            checks.append((f"fd {text} tau={t:.4g}", lambda spec=spec, t=t: (
                (e := fd_crosscheck(spec, t)) <= 1e-6, {"max_rel_error": e})))
    for i in range(20):
        rad = sum_of_squares_radicand(rng)
        checks.append((f"sqrt #{i}", lambda rad=rad: _sqrt_case(rad)))
    return checks


def sum_of_squares_radicand(rng, order=5):
    """Radicand jet built like the length element: sum of squared derivative jets."""
    from .jets import jet_shift_derivative
    while True:
        k = int(rng.integers(1, 4))
        t = float(rng.uniform(-2, 2))
        vel = [jet_shift_derivative(jet_eval(random_spec(rng), t, order + 1)) for _ in range(k)]
        rad = vel[0] * vel[0]
        for v in vel[1:]:
            rad = rad + v * v
        if rad.value >= 1e-6:
            return rad


def sqrt_relative_error(rad):
    from .jets import jet_sqrt
    b = jet_sqrt(rad)
    return float(np.max(np.abs((b * b).derivs - rad.derivs)) / np.max(np.abs(rad.derivs)))


def _sqrt_case(rad):
    e = sqrt_relative_error(rad)
    return e <= 1e-12, {"relative_error": e}


def _suite_gauge(rng):
    checks = []
    for i in range(25):
        sigma = random_sigma(rng)
        kind = i % 3
        if kind == 0:
            inp = random_r21_input(rng, 1)
        elif kind == 1:
            inp = random_r21_input(rng, int(rng.integers(2, 5)))
        else:
            inp = random_r22_input(rng)
        checks.append((f"{inp.space} #{i}", lambda inp=inp, sigma=sigma: (
            (r := gauge_orbit_check(inp, sigma, (-1.5, 1.5, 1000))).passed, r.to_dict())))
    return checks


SUITES = {
    "reference": _suite_reference,
    "symbolic": _suite_symbolic,
    "numeric": _suite_numeric,
    "roundtrip": _suite_roundtrip,
    "rank": _suite_rank,
    "planner": _suite_planner,
    "jets": _suite_jets,
    "gauge": _suite_gauge,
}


def run_suite(name, seed=0):
    """Run one named suite (or ``"all"``) and return its JSON-ready report."""
    if name == "all":
        reports = [run_suite(k, seed) for k in SUITES]
        passed = sum(r["passed"] for r in reports)
        cases = sum(r["cases"] for r in reports)
        return {"suite": "all", "cases": cases, "passed": passed,
                "failed": cases - passed, "details": reports}
    if name not in SUITES:
        raise KeyError(name)
    rng = np.random.default_rng(seed)
    return _suite(name, SUITES[name](rng))

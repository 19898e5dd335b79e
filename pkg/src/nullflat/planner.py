"""Two-point boundary value planning through the flat parametrizations.

Both maps are linear in the jets of the flat outputs, so connecting A to B
reduces to one small linear solve: pin a zero jet at the start, solve for
the end jet, and fill in a Hermite polynomial. The start point A comes back
as a constant shift. Time is normalized to s = (t - t0) / (t1 - t0).
The solve runs in exact rational arithmetic on the (binary-exact) inputs.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curves import CurveSpec
from .errors import DegenerateInterval, ValidationError
from .flat import FlatInputR21, FlatInputR22, generate
from .oracle import solve_exact

_DIMS = {"r21": 3, "r22": 4}


@dataclass(frozen=True)
class BoundaryProblem:
    space: str
    A: tuple
    B: tuple
    interval: tuple = (0.0, 1.0)

    def __post_init__(self):
        if self.space not in _DIMS:
            raise ValidationError(f"planning supports r21 and r22, not {self.space!r}", field="space")
        A = tuple(float(a) for a in self.A)
        B = tuple(float(b) for b in self.B)
        m = _DIMS[self.space]
        if len(A) != m or len(B) != m:
            raise ValidationError(f"{self.space} endpoints need {m} components", field="A/B")
        t0, t1 = (float(t) for t in self.interval)
        if t1 == t0:
            raise DegenerateInterval("interval has zero length", field="interval")
        if t1 < t0:
            raise ValidationError("interval must satisfy t0 < t1", field="interval")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "interval", (t0, t1))


@dataclass
class PlanResult:
    problem: BoundaryProblem
    f: CurveSpec
    g: CurveSpec
    shift: np.ndarray
    curve: object
    endpoint_errors: tuple

    @property
    def flat_input(self):
        return _flat_input(self.problem, self.f, self.g)


def _normalizer(interval):
    t0, t1 = (Fraction(t) for t in interval)
    return CurveSpec.poly(-t0 / (t1 - t0), 1 / (t1 - t0))


def _flat_input(problem, f, g):
    sigma = _normalizer(problem.interval)
    if problem.space == "r21":
        return FlatInputR21(f, sigma=sigma)
    return FlatInputR22(f, g, sigma=sigma)


def quintic_hermite(value, slope, curvature):
    """Coefficients c0..c5 of the quintic with zero 2-jet at 0 and the given 2-jet at 1."""
    a, b, c = solve_exact(
        [[1, 1, 1], [3, 4, 5], [6, 12, 20]], [value, slope, curvature]
    )
    return [Fraction(0)] * 3 + [a, b, c]


def cubic_hermite(value, slope):
    """Coefficients c0..c3 of the cubic with zero 1-jet at 0 and the given 1-jet at 1."""
    value, slope = Fraction(value), Fraction(slope)
    return [Fraction(0), Fraction(0), 3 * value - slope, slope - 2 * value]


def endpoint_matrix_r21():
    # columns u''(1), -u'(1), u(1) act on (f(1), f'(1), f''(1))
    return [[-2, 2, 0], [0, -2, 2], [2, -2, 2]]


def endpoint_matrix_r22():
    # columns u(1), -u'(1), v(1), -v'(1) act on (f'(1), f(1), g'(1), g(1))
    return [[1, 0, -1, 1], [1, -1, 1, 0], [1, 0, 1, -1], [-1, 1, 1, 0]]


def _finish(problem, f, g, samples):
    inp = _flat_input(problem, f, g)
    curve = generate(inp, (*problem.interval, samples), shift=problem.A)
    err_a = float(np.max(np.abs(curve.x[0] - np.array(problem.A))))
    err_b = float(np.max(np.abs(curve.x[-1] - np.array(problem.B))))
    return PlanResult(problem, f, g, np.array(problem.A), curve, (err_a, err_b))


def plan_r21(problem, samples=101):
    """Null curve in R^{2,1} from A to B over the problem interval."""
    if problem.space != "r21":
        raise ValidationError("plan_r21 needs an r21 problem", field="space")
    rhs = [Fraction(b) - Fraction(a) for a, b in zip(problem.A, problem.B)]
    jet = solve_exact(endpoint_matrix_r21(), rhs)
    f = CurveSpec.poly(*quintic_hermite(*jet))
    return _finish(problem, f, None, samples)


def plan_r22(problem, samples=101):
    """Null curve in R^{2,2} from A to B over the problem interval."""
    if problem.space != "r22":
        raise ValidationError("plan_r22 needs an r22 problem", field="space")
    rhs = [Fraction(b) - Fraction(a) for a, b in zip(problem.A, problem.B)]
    df1, f1, dg1, g1 = solve_exact(endpoint_matrix_r22(), rhs)
    f = CurveSpec.poly(*cubic_hermite(f1, df1))
    g = CurveSpec.poly(*cubic_hermite(g1, dg1))
    return _finish(problem, f, g, samples)


def plan(problem, samples=101):
    if problem.space == "r21":
        return plan_r21(problem, samples)
    return plan_r22(problem, samples)


def sample_plan(result, count):
    """Resample a plan on ``count`` points spanning the whole interval."""
    if count < 2:
        raise ValidationError("sample count must be >= 2", field="samples")
    return generate(
        result.flat_input, (*result.problem.interval, count), shift=result.shift
    )

"""Flat parametrizations of null curves in pseudo-Euclidean spaces R^{2,n}."""

from .curves import CurveSpec, jet_eval
from .errors import (
    DegenerateDelta,
    DegenerateGerm,
    DegenerateInterval,
    IdenticallyDegenerate,
    MathDegeneracy,
    NonPositiveRadicand,
    NullFlatError,
    SigmaNotMonotone,
    ValidationError,
)
from .flat import (
    FlatInputR21,
    FlatInputR22,
    InversionResult,
    SampledCurve,
    delta_map,
    generate,
    invert,
    invert_curve,
    invert_r21,
    invert_r22,
    r22_map,
    r2n_map,
    wh_map_r21,
)
from .geometry import PseudoVec, Signature, VecJet, basis_u_r21, basis_uv_r22, inner, null_residual
from .jets import Jet, jet_compose, jet_mul, jet_shift_derivative, jet_sqrt
from .planner import BoundaryProblem, PlanResult, plan, plan_r21, plan_r22, sample_plan
from .serialization import load_curve, save_curve

__version__ = "0.1.0"

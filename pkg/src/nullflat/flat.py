"""Explicit flat parametrizations of null curves in R^{2,n} and their inversions.

Generation maps (all return curve germs, i.e. :class:`VecJet`):

* :func:`wh_map_r21`  x = u f'' - u' f' + u'' f on the light-cone curve u
* :func:`delta_map`   x + u Delta / 2, a space-like curve with (x', x') = -Delta^2
* :func:`r2n_map`     R^{2,n}: Delta built from the extra coordinates x4..x_{n+2}
* :func:`r22_map`     R^{2,2}: x = u f' - u' f + v g' - v' g on two null lines

An optional reparametrization sigma is applied by evaluating the map at the
internal parameter s = sigma(tau) and composing every component jet with the
jet of sigma.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import SIGMA_MIN_SLOPE, default_eps_den, default_jet_order
from .curves import CurveSpec, as_spec, jet_eval
from .errors import (
    DegenerateDelta,
    DegenerateGerm,
    JetOrderError,
    MathDegeneracy,
    SigmaNotMonotone,
    ValidationError,
)
from .geometry import Signature, VecJet, basis_u_r21, basis_uv_r22, null_residual
from .jets import Jet, jet_compose, jet_mul, jet_shift_derivative, jet_sqrt


@dataclass(frozen=True)
class FlatInputR21:
    """Flat outputs for the R^{2,1} / R^{2,n} family.

    ``delta_extras`` are the coordinates x4..x_{n+2}; their count fixes n.
    """

    f: CurveSpec
    sigma: CurveSpec = None
    delta_extras: tuple = ()
    n: int = None

    def __post_init__(self):
        object.__setattr__(self, "f", as_spec(self.f))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", as_spec(self.sigma))
        extras = tuple(as_spec(e) for e in self.delta_extras)
        object.__setattr__(self, "delta_extras", extras)
        n = len(extras) + 1 if self.n is None else int(self.n)
        if n < 1:
            raise ValidationError("n must be >= 1", field="n")
        if len(extras) != n - 1:
            raise ValidationError(
                f"R^{{2,{n}}} needs {n - 1} extra coordinates, got {len(extras)}",
                field="delta_extras",
            )
        object.__setattr__(self, "n", n)

    @property
    def space(self):
        return "r21" if self.n == 1 else "r2n"


@dataclass(frozen=True)
class FlatInputR22:
    f: CurveSpec
    g: CurveSpec
    sigma: CurveSpec = None

    def __post_init__(self):
        object.__setattr__(self, "f", as_spec(self.f))
        object.__setattr__(self, "g", as_spec(self.g))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", as_spec(self.sigma))

    n = 2
    space = "r22"


@dataclass(frozen=True)
class InversionResult:
    """Recovered flat outputs; fields are scalars or arrays matching the germ batch."""

    tau_hat: object
    f_hat: object
    g_hat: object = None
    denominators: tuple = ()


def _combine(pairs):
    # sum of (basis germ) * (scalar jet) over pairs
    comps = None
    for basis, scalar in pairs:
        terms = [jet_mul(b, scalar) for b in basis.components]
        comps = terms if comps is None else [a + t for a, t in zip(comps, terms)]
    return VecJet(comps, pairs[0][0].signature)


def _derivs_of(jet, upto, order):
    # jet (or germ) and its first ``upto`` derivatives, truncated to ``order``
    out = [jet]
    for _ in range(upto):
        prev = out[-1]
        out.append(prev.diff() if isinstance(prev, VecJet) else jet_shift_derivative(prev))
    return [j.truncate(order) for j in out]


def wh_map_r21(fjet, s):
    """Germ of x = u f'' - u' f' + u'' f at internal parameter ``s``.

    The result has order ``fjet.order - 2``; its velocity is u f'''.
    """
    if fjet.order < 2:
        raise JetOrderError("wh_map_r21 needs a jet of f of order >= 2")
    L = fjet.order - 2
    u, du, ddu = _derivs_of(basis_u_r21(s, fjet.order), 2, L)
    f, df, ddf = _derivs_of(fjet, 2, L)
    return _combine([(u, ddf), (du.scale(-1.0), df), (ddu, f)])


def delta_map(fjet, delta_jet, s):
    """Germ of the curve with prescribed length element, (x', x') = -Delta^2."""
    L = min(fjet.order - 2, delta_jet.order)
    if L < 0:
        raise JetOrderError("delta_map needs jets of order >= 2 for f and >= 0 for Delta")
    base = wh_map_r21(fjet, s).truncate(L)
    u = basis_u_r21(s, L)
    return base + _combine([(u, delta_jet.truncate(L) * 0.5)])


def _reparam(sigma, tau, order):
    tau = np.asarray(tau, dtype=float)
    if sigma is None:
        return Jet.variable(tau, order)
    sj = jet_eval(sigma, tau, order)
    if order >= 1:
        bad = np.abs(sj[1]) < SIGMA_MIN_SLOPE
        if np.any(bad):
            i = int(np.flatnonzero(np.atleast_1d(bad))[0])
            t = float(np.atleast_1d(tau)[i])
            raise SigmaNotMonotone(
                f"|sigma'({t:.17g})| < {SIGMA_MIN_SLOPE:g}",
                tau=t,
                index=i if tau.ndim else None,
            )
    return sj


def _compose(germ, sj, sigma):
    if sigma is None:
        return germ
    return germ.map(lambda c: jet_compose(c, sj))


def _with_tau(exc, tau):
    # attach the offending parameter value to an error raised inside a batch
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    i = exc.index if exc.index is not None else 0
    exc.tau = float(tau[i])
    return exc


def r2n_map(inp, tau, order=None):
    """Germ of the null curve in R^{2,n} at ``tau`` (scalar or 1-D array)."""
    K = default_jet_order() if order is None else order
    if K < 1:
        raise JetOrderError("r2n_map needs order >= 1")
    sj = _reparam(inp.sigma, tau, K)
    s = sj.value
    fjet = jet_eval(inp.f, s, K + 2)
    extras = inp.delta_extras
    if not extras or all(e.is_constant() for e in extras):
        head = wh_map_r21(fjet, s)
        ejets = [jet_eval(e, s, K) for e in extras]
    else:
        ejets = [jet_eval(e, s, K + 1) for e in extras]
        vel = [jet_shift_derivative(e) for e in ejets]
        radicand = vel[0] * vel[0]
        for v in vel[1:]:
            radicand = radicand + v * v
        bad = ~(radicand.value > 0)
        if np.any(bad):
            i = int(np.flatnonzero(np.atleast_1d(bad))[0])
            t = float(np.atleast_1d(np.asarray(tau, dtype=float))[i])
            raise DegenerateDelta(
                f"Delta vanishes at tau={t:.17g} with non-constant extras",
                tau=t,
                index=i if np.ndim(tau) else None,
            )
        head = delta_map(fjet, jet_sqrt(radicand), s)
        ejets = [e.truncate(K) for e in ejets]
    germ = VecJet(list(head.components) + ejets, Signature(2, inp.n))
    return _compose(germ, sj, inp.sigma)


def r22_map(inp, tau, order=None):
    """Germ of the null curve x = u f' - u' f + v g' - v' g in R^{2,2}."""
    K = default_jet_order() if order is None else order
    if K < 1:
        raise JetOrderError("r22_map needs order >= 1")
    sj = _reparam(inp.sigma, tau, K)
    s = sj.value
    U, V = basis_uv_r22(s, K + 1)
    u, du = U.truncate(K), U.diff()
    v, dv = V.truncate(K), V.diff()
    f, df = _derivs_of(jet_eval(inp.f, s, K + 1), 1, K)
    g, dg = _derivs_of(jet_eval(inp.g, s, K + 1), 1, K)
    germ = _combine([(u, df), (du.scale(-1.0), f), (v, dg), (dv.scale(-1.0), g)])
    return _compose(germ, sj, inp.sigma)


def curve_germ(inp, tau, order=None):
    if isinstance(inp, FlatInputR22):
        return r22_map(inp, tau, order)
    return r2n_map(inp, tau, order)


def expected_outputs(inp, tau):
    """Flat outputs a perfect inversion returns: (sigma(tau), f(sigma(tau)), g(...))."""
    tau = np.asarray(tau, dtype=float)
    s = tau if inp.sigma is None else inp.sigma(tau)
    g = inp.g(s) if isinstance(inp, FlatInputR22) else None
    return s, inp.f(s), g


def _degenerate(mask, tau, what, on_degenerate):
    if not np.any(mask):
        return
    if on_degenerate == "nan":
        return
    i = int(np.flatnonzero(np.atleast_1d(mask))[0])
    t = None
    if tau is not None:
        t = float(np.atleast_1d(np.asarray(tau, dtype=float))[i])
    where = "" if t is None else f" at tau={t:.17g}"
    raise DegenerateGerm(
        f"{what}{where}: inversion undefined (stationary flat output)",
        tau=t,
        index=i if np.ndim(mask) else None,
    )


def _scalar(a):
    a = np.asarray(a)
    return float(a) if a.ndim == 0 else a


def delta_from_germ(germ, orientation=1.0):
    """Length element sqrt(x4'^2 + ... ) of an R^{2,n} germ; zero for n = 1."""
    xd = germ.derivative(1)
    if xd.shape[0] <= 3:
        return np.zeros(xd.shape[1:])
    return orientation * np.sqrt(np.sum(xd[3:] ** 2, axis=0))


def invert_r21(germ, delta_value=None, *, eps_den=None, orientation=1.0,
               tau=None, on_degenerate="raise"):
    """Recover (tau_hat, f_hat) from an R^{2,1} or R^{2,n} germ.

    ``delta_value`` defaults to the length element of components 4.. times
    ``orientation`` (the sign of sigma' when the germ was reparametrized by a
    decreasing map). ``f_hat`` is half the classical formula so that the
    round trip is the identity. ``tau`` is used only in error messages.
    With ``on_degenerate="nan"`` degenerate points yield NaN instead of raising.
    """
    if germ.order < 1:
        raise JetOrderError("inversion needs a germ of order >= 1")
    if germ.signature.p != 2 or germ.signature.dim < 3:
        raise ValidationError(f"not an R^{{2,n}} germ: {germ.signature}")
    eps = default_eps_den() if eps_den is None else eps_den
    x, xd = germ.value, germ.derivative(1)
    delta = delta_from_germ(germ, orientation) if delta_value is None else delta_value
    den = xd[0] + xd[2]
    bad = np.abs(den) < eps
    _degenerate(bad, tau, "|x1' + x3'| below threshold", on_degenerate)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (xd[1] - delta) / np.where(bad, np.nan, den)
    f_classic = 0.5 * t**2 * (x[2] + x[0]) - t * x[1] + 0.5 * (x[2] - x[0])
    return InversionResult(
        _scalar(t), _scalar(0.5 * f_classic), None, (_scalar(np.abs(den)),)
    )


def invert_r22(germ, *, eps_den=None, tau=None, on_degenerate="raise"):
    """Recover (tau_hat, f_hat, g_hat) from an R^{2,2} germ.

    tau_hat comes from whichever of the two equivalent quotients has the
    larger denominator, and is then used in both the f and g formulas.
    """
    if germ.order < 1:
        raise JetOrderError("inversion needs a germ of order >= 1")
    if germ.signature != Signature(2, 2):
        raise ValidationError(f"not an R^{{2,2}} germ: {germ.signature}")
    eps = default_eps_den() if eps_den is None else eps_den
    x, xd = germ.value, germ.derivative(1)
    d1 = xd[2] + xd[0]
    d2 = xd[1] + xd[3]
    bad = (np.abs(d1) < eps) & (np.abs(d2) < eps)
    _degenerate(bad, tau, "both inversion denominators below threshold", on_degenerate)
    use1 = np.abs(d1) >= np.abs(d2)
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = (xd[1] - xd[3]) / d1
        t2 = (xd[2] - xd[0]) / d2
        t = np.where(bad, np.nan, np.where(use1, t1, t2))
    f_hat = 0.5 * t * (x[2] + x[0]) - 0.5 * (x[1] - x[3])
    g_hat = 0.5 * t * (x[1] + x[3]) - 0.5 * (x[2] - x[0])
    return InversionResult(
        _scalar(t), _scalar(f_hat), _scalar(g_hat),
        (_scalar(np.abs(d1)), _scalar(np.abs(d2))),
    )


def tau_quotients_r22(germ):
    """Both tau expressions of the R^{2,2} inversion (for consistency checks)."""
    xd = germ.derivative(1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (xd[1] - xd[3]) / (xd[2] + xd[0]), (xd[2] - xd[0]) / (xd[1] + xd[3])


def invert(germ, space, **kw):
    if space == "r22":
        kw.pop("orientation", None)
        kw.pop("delta_value", None)
        return invert_r22(germ, **kw)
    return invert_r21(germ, **kw)


@dataclass
class SampledCurve:
    """A null curve sampled on a uniform grid.

    ``x`` and ``xdot`` have shape ``(count, n + 2)``; ``residual`` holds
    ``(x', x')`` per sample. ``xdot`` may be ``None`` for curves loaded from CSV.
    """

    space: str
    n: int
    tau: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    residual: np.ndarray
    grid: tuple = None
    signature: Signature = field(default=None)

    def __post_init__(self):
        if self.signature is None:
            self.signature = Signature(2, self.n)
        self.tau = np.asarray(self.tau, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        if self.xdot is not None:
            self.xdot = np.asarray(self.xdot, dtype=float)
        self.residual = np.asarray(self.residual, dtype=float)
        if self.grid is None:
            self.grid = (float(self.tau[0]), float(self.tau[-1]), len(self.tau))

    def __len__(self):
        return len(self.tau)

    def germ(self):
        """Order-1 germ (position and velocity) batched over all samples."""
        if self.xdot is None:
            raise ValidationError("curve has no velocity column; inversion needs xdot", field="samples/xdot")
        comps = [Jet(np.stack([self.x[:, i], self.xdot[:, i]])) for i in range(self.x.shape[1])]
        return VecJet(comps, self.signature)

    def scaled_residual(self):
        """|(x', x')| / max(1, |x'|^2), the quantity bounded by the null checks."""
        speed2 = np.sum(self.xdot**2, axis=1)
        return np.abs(self.residual) / np.maximum(1.0, speed2)


def parse_grid(grid):
    """Validate ``(t0, t1, count)`` and return the sample points."""
    if isinstance(grid, str):
        parts = grid.split(",")
        if len(parts) != 3:
            raise ValidationError(f"grid must be t0,t1,count; got {grid!r}", field="grid")
        grid = parts
    try:
        t0, t1, count = float(grid[0]), float(grid[1]), grid[2]
        if isinstance(count, str):
            count = int(count.strip())
        elif float(count) != int(count):
            raise ValueError
        count = int(count)
    except (ValueError, TypeError, IndexError) as exc:
        raise ValidationError(f"bad grid {grid!r}", field="grid") from exc
    if count < 2:
        raise ValidationError("grid count must be >= 2", field="grid")
    if not t0 < t1:
        raise ValidationError("grid needs t0 < t1", field="grid")
    return (t0, t1, count), np.linspace(t0, t1, count)


def generate(inp, grid, order=None, shift=None):
    """Sample the null curve of ``inp`` on ``grid = (t0, t1, count)``.

    Map errors propagate with the offending grid index and tau attached.
    ``shift`` adds a constant vector to every position.
    """
    grid, taus = parse_grid(grid)
    K = default_jet_order() if order is None else order
    try:
        germ = curve_germ(inp, taus, K)
    except MathDegeneracy as exc:
        raise _with_tau(exc, taus)
    x = germ.value.T
    if shift is not None:
        x = x + np.asarray(shift, dtype=float)
    res = null_residual(germ).value
    return SampledCurve(
        inp.space, inp.n, taus, x, germ.derivative(1).T, res, grid, Signature(2, inp.n)
    )


def invert_curve(curve, *, eps_den=None, orientation=1.0, on_degenerate="raise"):
    """Invert every sample of a :class:`SampledCurve`."""
    return invert(
        curve.germ(), curve.space, eps_den=eps_den, orientation=orientation,
        tau=curve.tau, on_degenerate=on_degenerate,
    )

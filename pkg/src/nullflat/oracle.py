"""Exact rational polynomial engine used to certify the parametrization identities.

Everything here runs on :class:`fractions.Fraction`, so the null identities
are checked as polynomial equalities with no tolerance at all. The module is
deliberately independent of the floating-point jet pipeline it checks.
"""

from fractions import Fraction
from math import isqrt

from .errors import IdenticallyDegenerate, ValidationError
from .geometry import Signature


class RatPoly:
    """Dense univariate polynomial with exact rational coefficients (index = degree)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(0,)):
        c = [Fraction(x) for x in coeffs] or [Fraction(0)]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self):
        return self.coeffs == (0,)

    def __eq__(self, other):
        if not isinstance(other, RatPoly):
            other = RatPoly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({', '.join(str(c) for c in self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def _lift(self, other):
        return other if isinstance(other, RatPoly) else RatPoly.const(other)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = RatPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def deriv(self, k=1):
        c = list(self.coeffs)
        for _ in range(k):
            c = [i * ci for i, ci in enumerate(c)][1:] or [0]
        return RatPoly(c)

    def __call__(self, t):
        acc = Fraction(0) if isinstance(t, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + (c if not isinstance(acc, float) else float(c))
        return acc

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RatPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return RatPoly(quot), RatPoly(rem[: len(other.coeffs) - 1] or [0])

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{self!r} is not divisible by {other!r}")
        return q


T = RatPoly.x()


def _u_r21():
    return [1 - T * T, 2 * T, 1 + T * T]


def _uv_r22():
    one = RatPoly.const(1)
    return [one, T, one, -T], [-T, one, T, one]


def _lin(*pairs):
    # componentwise sum of basis * scalar-poly
    comps = None
    for basis, s in pairs:
        terms = [b * s for b in basis]
        comps = terms if comps is None else [a + t for a, t in zip(comps, terms)]
    return comps


def _d(vec, k=1):
    return [c.deriv(k) for c in vec]


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


MAP_IDS = ("r21", "delta_const", "r2n_linear_extras", "r22", "r22_literal")


def poly_expand_map(map_id, f, g=None, extras=None, delta=None):
    """Exact component polynomials of a parametrization.

    ``delta_const`` takes a constant ``delta``; ``r2n_linear_extras`` takes
    affine ``extras`` whose slopes have a rational Euclidean norm, so that
    the length element is a rational constant.
    """
    f = f if isinstance(f, RatPoly) else RatPoly(f)
    if map_id == "r21":
        u = _u_r21()
        return _lin((u, f.deriv(2)), (_d(u), -f.deriv(1)), (_d(u, 2), f))
    if map_id == "delta_const":
        if delta is None:
            raise ValidationError("delta_const needs a constant delta")
        base = poly_expand_map("r21", f)
        return [b + c * (Fraction(delta) / 2) for b, c in zip(base, _u_r21())]
    if map_id == "r2n_linear_extras":
        extras = [e if isinstance(e, RatPoly) else RatPoly(e) for e in (extras or [])]
        if any(e.degree > 1 for e in extras):
            raise ValidationError("oracle supports only affine extra coordinates")
        sq = sum((e.deriv()(Fraction(0)) ** 2 for e in extras), Fraction(0))
        delta = _rational_sqrt(sq)
        if delta is None:
            raise ValidationError(
                f"length element sqrt({sq}) is not rational; not a polynomial case"
            )
        return poly_expand_map("delta_const", f, delta=delta) + extras
    if map_id in ("r22", "r22_literal"):
        g = RatPoly() if g is None else (g if isinstance(g, RatPoly) else RatPoly(g))
        u, v = _uv_r22()
        if map_id == "r22":
            return _lin((u, f.deriv()), (_d(u), -f), (v, g.deriv()), (_d(v), -g))
        # as printed: x = u f' + v g' - u f - v g
        return _lin((u, f.deriv() - f), (v, g.deriv() - g))
    raise ValidationError(f"unknown map id {map_id!r}")


def poly_null_residual(components, signature):
    """Exact polynomial ``(x', x')``."""
    if len(components) != signature.dim:
        raise ValidationError(
            f"{len(components)} components for signature ({signature.p},{signature.q})"
        )
    out = RatPoly()
    for eps, c in zip(signature.metric, components):
        dc = c.deriv()
        out = out + dc * dc * int(eps)
    return out


def typo_witness(f=None, g=None):
    """Residual of the map exactly as printed, for f = t^2, g = t^3 by default.

    It equals 4 (F' G - F G') with F = f' - f, G = g' - g and is not the zero
    polynomial, so the printed map does not produce null curves.
    """
    f = T * T if f is None else f
    g = T * T * T if g is None else g
    comps = poly_expand_map("r22_literal", f, g)
    return poly_null_residual(comps, Signature(2, 2))


def _ratio_check(num, den):
    if den.is_zero():
        raise IdenticallyDegenerate("inversion denominator is the zero polynomial")
    return num, den


def poly_tau_hat(map_id, f, g=None, delta=0):
    """Exact recovered internal parameter; ``T`` (the identity) when the formula is right."""
    f = f if isinstance(f, RatPoly) else RatPoly(f)
    x = _expand_for_inversion(map_id, f, g, delta)
    xd = _d(x)
    if map_id == "r22":
        num, den = _r22_tau(xd)
    else:
        num, den = _ratio_check(xd[1] - Fraction(delta), xd[0] + xd[2])
    return num.exact_div(den)


def _expand_for_inversion(map_id, f, g, delta):
    if map_id == "r21":
        return poly_expand_map("r21", f) if not delta else poly_expand_map("delta_const", f, delta=delta)
    if map_id == "r22":
        return poly_expand_map("r22", f, g)
    raise ValidationError(f"no inversion for map id {map_id!r}")


def _r22_tau(xd):
    n1, d1 = xd[1] - xd[3], xd[2] + xd[0]
    n2, d2 = xd[2] - xd[0], xd[1] + xd[3]
    if not d1.is_zero():
        return n1, d1
    return _ratio_check(n2, d2)


def poly_invert_roundtrip(map_id, f, g=None, delta=0):
    """Apply the closed-form flat-output formulas symbolically.

    Returns ``(f_rec, g_rec)``. For ``r21`` the classical formula is returned
    as is (it equals ``2 f``); for ``r22`` the formulas give ``f`` and ``g``.
    """
    f = f if isinstance(f, RatPoly) else RatPoly(f)
    x = _expand_for_inversion(map_id, f, g, delta)
    xd = _d(x)
    if map_id == "r21":
        num, den = _ratio_check(xd[1] - Fraction(delta), xd[0] + xd[2])
        # f = 1/2 T^2 (x3 + x1) - T x2 + 1/2 (x3 - x1), T = num / den
        top = (num * num * (x[2] + x[0]) * Fraction(1, 2) - num * den * x[1]
               + den * den * (x[2] - x[0]) * Fraction(1, 2))
        return top.exact_div(den * den), None
    n1, d1 = xd[1] - xd[3], xd[2] + xd[0]
    n2, d2 = xd[2] - xd[0], xd[1] + xd[3]
    if d1.is_zero() and d2.is_zero():
        raise IdenticallyDegenerate("both R^{2,2} denominators are the zero polynomial")
    # a vanishing denominator is replaced by the other, equivalent, tau quotient
    fn, fd = (n1, d1) if not d1.is_zero() else (n2, d2)
    gn, gd = (n2, d2) if not d2.is_zero() else (n1, d1)
    f_rec = (fn * (x[2] + x[0]) - fd * (x[1] - x[3])) * Fraction(1, 2)
    g_rec = (gn * (x[1] + x[3]) - gd * (x[2] - x[0])) * Fraction(1, 2)
    return f_rec.exact_div(fd), g_rec.exact_div(gd)


def r22_tau_consistency(f, g):
    """Cross-multiplied difference of the two R^{2,2} tau quotients (zero when consistent)."""
    xd = _d(poly_expand_map("r22", f, g))
    return (xd[1] - xd[3]) * (xd[1] + xd[3]) - (xd[2] - xd[0]) * (xd[2] + xd[0])


def solve_exact(matrix, rhs):
    """Solve a square linear system over the rationals by Gaussian elimination."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                m = a[r][col] / a[col][col]
                a[r] = [x - m * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def spec_to_ratpoly(spec):
    """Exact polynomial of a curve spec made only of polynomial terms."""
    out = RatPoly()
    for term in spec.terms:
        coeffs = getattr(term, "coeffs", None)
        if coeffs is None:
            raise ValidationError(f"{term.text()} is not polynomial")
        out = out + RatPoly(coeffs)
    return out

"""Closed analytic grammar for scalar flat-output functions.

A :class:`CurveSpec` is a finite sum of polynomial, scaled sine/cosine and
exponential terms. Every such function is entire, so :func:`jet_eval` can
return exact derivatives of any order at any real point.

Text form (used on the command line and in JSON)::

    poly:c0,c1,... | sin:a,w | cos:a,w | exp:a,l   joined by '+'

Numbers are decimal or ``p/q`` literals and are kept as exact fractions.
"""

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ValidationError
from .jets import Jet


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad numeric literal {x!r}") from exc
    return Fraction(x)


def _fmt(x):
    return str(x)


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValidationError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))

    def derivs(self, tau, order):
        coeffs = list(self.coeffs)
        out = []
        for _ in range(order + 1):
            # numpy polyval wants highest degree first
            out.append(np.polyval([float(c) for c in reversed(coeffs)], tau))
            coeffs = [k * c for k, c in enumerate(coeffs)][1:] or [Fraction(0)]
        return out

    def mp_value(self, tau):
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * tau + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def is_constant(self):
        return all(c == 0 for c in self.coeffs[1:])

    def text(self):
        return "poly:" + ",".join(_fmt(c) for c in self.coeffs)


@dataclass(frozen=True)
class _Scaled:
    a: Fraction
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "w", _frac(self.w))

    def is_constant(self):
        return self.a == 0 or self.w == 0

    def text(self):
        return f"{self.tag}:{_fmt(self.a)},{_fmt(self.w)}"


class Sin(_Scaled):
    """``a * sin(w * tau)``"""

    tag = "sin"

    def derivs(self, tau, order):
        a, w = float(self.a), float(self.w)
        s, c = np.sin(w * tau), np.cos(w * tau)
        cycle = (s, c, -s, -c)
        return [a * w**i * cycle[i % 4] for i in range(order + 1)]

    def mp_value(self, tau):
        return _mp(self.a) * mpmath.sin(_mp(self.w) * tau)


class Cos(_Scaled):
    """``a * cos(w * tau)``"""

    tag = "cos"

    def derivs(self, tau, order):
        a, w = float(self.a), float(self.w)
        s, c = np.sin(w * tau), np.cos(w * tau)
        cycle = (c, -s, -c, s)
        return [a * w**i * cycle[i % 4] for i in range(order + 1)]

    def mp_value(self, tau):
        return _mp(self.a) * mpmath.cos(_mp(self.w) * tau)


class Exp(_Scaled):
    """``a * exp(l * tau)``; the rate is stored in ``w``."""

    tag = "exp"

    def derivs(self, tau, order):
        a, lam = float(self.a), float(self.w)
        e = a * np.exp(lam * tau)
        return [lam**i * e for i in range(order + 1)]

    def mp_value(self, tau):
        return _mp(self.a) * mpmath.exp(_mp(self.w) * tau)


def _mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


_TERMS = {"poly": Polynomial, "sin": Sin, "cos": Cos, "exp": Exp}


@dataclass(frozen=True)
class CurveSpec:
    """Sum of analytic terms describing one scalar function of tau."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValidationError("a curve spec needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text):
        if not isinstance(text, str) or not text.strip():
            raise ValidationError(f"empty curve spec {text!r}")
        terms = []
        for chunk in text.split("+"):
            kind, sep, args = chunk.strip().partition(":")
            if not sep or kind not in _TERMS:
                raise ValidationError(
                    f"bad curve term {chunk.strip()!r}; expected one of "
                    "poly:..., sin:a,w, cos:a,w, exp:a,l"
                )
            nums = [a for a in args.split(",")]
            if any(not a.strip() for a in nums):
                raise ValidationError(f"missing number in {chunk.strip()!r}")
            if kind == "poly":
                terms.append(Polynomial(tuple(_frac(a) for a in nums)))
            else:
                if len(nums) != 2:
                    raise ValidationError(f"{kind} takes exactly two numbers")
                terms.append(_TERMS[kind](*nums))
        return cls(tuple(terms))

    @classmethod
    def poly(cls, *coeffs):
        return cls((Polynomial(tuple(coeffs)),))

    def text(self):
        return "+".join(t.text() for t in self.terms)

    __str__ = text

    def is_constant(self):
        return all(t.is_constant() for t in self.terms)

    def __call__(self, tau):
        return jet_eval(self, tau, 0).value

    def mp_value(self, tau):
        """High-precision value through mpmath (used by finite-difference checks)."""
        return mpmath.fsum(t.mp_value(tau) for t in self.terms)


def as_spec(x):
    if isinstance(x, CurveSpec):
        return x
    if isinstance(x, str):
        return CurveSpec.parse(x)
    raise ValidationError(f"not a curve spec: {x!r}")


def jet_eval(spec, tau, order):
    """Exact derivative jet of ``spec`` at ``tau`` (scalar or 1-D array)."""
    if order < 0:
        raise ValidationError("jet order must be non-negative")
    tau = np.asarray(tau, dtype=float)
    total = np.zeros((order + 1,) + tau.shape)
    for term in spec.terms:
        total += np.array(term.derivs(tau, order)).reshape(total.shape)
    return Jet(total)


"""Truncated Taylor jets of scalar functions.

A :class:`Jet` of order K stores the raw derivatives ``(f, f', ..., f^(K))``
of a function at one point. The leading axis of ``derivs`` indexes the
derivative order; any trailing axes are a batch of independent points, so a
whole sampling grid moves through the arithmetic in one pass.
"""

from math import comb, factorial

import numpy as np

from .errors import JetOrderError, NonPositiveRadicand


def _factorials(order, ndim):
    f = np.array([factorial(i) for i in range(order + 1)], dtype=float)
    return f.reshape((order + 1,) + (1,) * (ndim - 1))


class Jet:
    """Value and first ``order`` derivatives of a scalar function at a point.

    Instances are immutable. Arithmetic between two jets requires equal
    orders; scalars (or arrays broadcasting against the batch shape) are
    accepted anywhere a jet is.
    """

    __slots__ = ("_d",)

    def __init__(self, derivs):
        d = np.array(derivs, dtype=float)
        if d.ndim == 0:
            raise JetOrderError("a jet needs at least one entry (the value)")
        d.setflags(write=False)
        self._d = d

    @classmethod
    def constant(cls, c, order):
        c = np.asarray(c, dtype=float)
        d = np.zeros((order + 1,) + c.shape)
        d[0] = c
        return cls(d)

    @classmethod
    def variable(cls, t, order):
        """Jet of the identity function at ``t``."""
        t = np.asarray(t, dtype=float)
        d = np.zeros((order + 1,) + t.shape)
        d[0] = t
        if order >= 1:
            d[1] = 1.0
        return cls(d)

    @property
    def derivs(self):
        return self._d

    @property
    def order(self):
        return self._d.shape[0] - 1

    @property
    def value(self):
        return self._d[0]

    @property
    def batch_shape(self):
        return self._d.shape[1:]

    def __getitem__(self, i):
        return self._d[i]

    def __len__(self):
        return self._d.shape[0]

    def __repr__(self):
        if self._d.ndim == 1:
            body = ", ".join(f"{v:.17g}" for v in self._d)
            return f"Jet({body})"
        return f"Jet(order={self.order}, batch={self.batch_shape})"

    def truncate(self, order):
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self._d[: order + 1])

    def taylor(self):
        """Taylor coefficients ``f^(i)(t) / i!``."""
        return self._d / _factorials(self.order, self._d.ndim)

    @classmethod
    def from_taylor(cls, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        return cls(coeffs * _factorials(coeffs.shape[0] - 1, coeffs.ndim))

    def is_finite(self):
        return bool(np.all(np.isfinite(self._d)))

    def allclose(self, other, rtol=1e-12, atol=0.0):
        other = _as_jet(other, self.order)
        return self.order == other.order and np.allclose(
            self._d, other._d, rtol=rtol, atol=atol
        )

    def _check(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                raise JetOrderError(
                    f"jet order mismatch: {self.order} vs {other.order}"
                )
            return other
        return None

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            d = np.array(self._d)
            d[0] = d[0] + other
            return Jet(d)
        return Jet(self._d + o._d)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self._d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self._d * np.asarray(other, dtype=float))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return Jet(self._d / np.asarray(other, dtype=float))


def _as_jet(x, order):
    return x if isinstance(x, Jet) else Jet.constant(x, order)


def jet_mul(a, b):
    """Product of two jets by the general Leibniz rule."""
    if a.order != b.order:
        raise JetOrderError(f"jet order mismatch: {a.order} vs {b.order}")
    ad, bd = a.derivs, b.derivs
    out = np.zeros(np.broadcast_shapes(ad.shape, bd.shape))
    for k in range(a.order + 1):
        for j in range(k + 1):
            out[k] += comb(k, j) * ad[j] * bd[k - j]
    return Jet(out)


def _series_mul(a, b):
    # truncated Cauchy product of Taylor coefficient arrays
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for k in range(a.shape[0]):
        for j in range(k + 1):
            out[k] += a[j] * b[k - j]
    return out


def jet_compose(outer, inner):
    """Jet of ``f(sigma(t))`` from the jet of ``f`` at ``sigma(t0)`` and of ``sigma`` at ``t0``.

    Implemented as composition of truncated power series, which is the
    Faa di Bruno formula evaluated by Horner's scheme.
    """
    if outer.order != inner.order:
        raise JetOrderError(
            f"jet order mismatch: {outer.order} vs {inner.order}"
        )
    F = outer.taylor()
    S = np.array(inner.taylor())
    S[0] = 0.0
    R = np.zeros(np.broadcast_shapes(F.shape, S.shape))
    R[0] = F[-1]
    for k in range(outer.order - 1, -1, -1):
        R = _series_mul(R, S)
        R[0] = R[0] + F[k]
    return Jet.from_taylor(R)


def jet_sqrt(a):
    """Jet of ``sqrt(a)``; the radicand value must be strictly positive."""
    A = a.taylor()
    bad = ~(A[0] > 0)
    if np.any(bad):
        idx = int(np.flatnonzero(np.ravel(bad))[0]) if A.ndim > 1 else None
        raise NonPositiveRadicand(
            "square root of a jet with non-positive value", index=idx
        )
    B = np.zeros_like(A)
    B[0] = np.sqrt(A[0])
    for k in range(1, a.order + 1):
        acc = A[k]
        for j in range(1, k):
            acc = acc - B[j] * B[k - j]
        B[k] = acc / (2.0 * B[0])
    return Jet.from_taylor(B)


def jet_div(a, b):
    """Quotient jet ``a / b``; ``b`` must not vanish."""
    if a.order != b.order:
        raise JetOrderError(f"jet order mismatch: {a.order} vs {b.order}")
    A, Bc = a.taylor(), b.taylor()
    Q = np.zeros(np.broadcast_shapes(A.shape, Bc.shape))
    for k in range(a.order + 1):
        acc = A[k]
        for j in range(1, k + 1):
            acc = acc - Bc[j] * Q[k - j]
        Q[k] = acc / Bc[0]
    return Jet.from_taylor(Q)


def jet_shift_derivative(a):
    """Jet of the derivative ``a'``, one order lower."""
    if a.order < 1:
        raise JetOrderError("cannot differentiate an order-0 jet")
    return Jet(a.derivs[1:])

"""Pseudo-Euclidean signatures, inner products and the fixed null reference curves.

Axis convention: the ``p`` negative axes come first, so in R^{2,n} the
metric is ``diag(-1, -1, +1, ..., +1)`` and components are ``x1..x_{n+2}``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import JetOrderError, SignatureMismatch, ValidationError
from .jets import Jet, jet_mul, jet_shift_derivative


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValidationError(f"invalid signature ({self.p}, {self.q})")

    @classmethod
    def r2n(cls, n):
        return cls(2, n)

    @property
    def dim(self):
        return self.p + self.q

    @property
    def metric(self):
        return np.array([-1.0] * self.p + [1.0] * self.q)

    def to_dict(self):
        return {"p": self.p, "q": self.q}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["p"]), int(d["q"]))


def _check_len(sig, n):
    if n != sig.dim:
        raise SignatureMismatch(
            f"{n} components given for signature ({sig.p},{sig.q})"
        )


@dataclass(frozen=True, eq=False)
class PseudoVec:
    components: np.ndarray
    signature: Signature

    def __post_init__(self):
        c = np.array(self.components, dtype=float)
        _check_len(self.signature, c.shape[0])
        c.setflags(write=False)
        object.__setattr__(self, "components", c)


def metric_dot(signature, a, b):
    """Inner product along axis 0 of two component arrays."""
    eps = signature.metric.reshape((-1,) + (1,) * (np.ndim(a) - 1))
    return np.sum(eps * np.asarray(a) * np.asarray(b), axis=0)


def inner(a, b):
    """Scalar product ``sum eps_i a_i b_i`` of two vectors in the same space."""
    if a.signature != b.signature:
        raise SignatureMismatch(f"{a.signature} vs {b.signature}")
    return float(metric_dot(a.signature, a.components, b.components))


class VecJet:
    """Germ of a curve: one :class:`Jet` per component, all of equal order."""

    __slots__ = ("components", "signature")

    def __init__(self, components, signature):
        components = tuple(components)
        _check_len(signature, len(components))
        orders = {c.order for c in components}
        if len(orders) != 1:
            raise JetOrderError(f"component jets have mixed orders {sorted(orders)}")
        self.components = components
        self.signature = signature

    @property
    def order(self):
        return self.components[0].order

    def derivative(self, i=0):
        """Array of i-th derivatives, shape ``(dim, *batch)``."""
        return np.array([c[i] for c in self.components])

    @property
    def value(self):
        return self.derivative(0)

    def point(self, i=0):
        """i-th derivative as a :class:`PseudoVec` (unbatched germs only)."""
        return PseudoVec(self.derivative(i), self.signature)

    def diff(self):
        return VecJet([jet_shift_derivative(c) for c in self.components], self.signature)

    def truncate(self, order):
        return VecJet([c.truncate(order) for c in self.components], self.signature)

    def map(self, fn):
        return VecJet([fn(c) for c in self.components], self.signature)

    def __add__(self, other):
        if isinstance(other, VecJet):
            if other.signature != self.signature:
                raise SignatureMismatch(f"{self.signature} vs {other.signature}")
            return VecJet(
                [a + b for a, b in zip(self.components, other.components)],
                self.signature,
            )
        # constant shift, one entry per component
        return VecJet(
            [a + c for a, c in zip(self.components, other)], self.signature
        )

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def scale(self, s):
        """Multiply every component by a scalar or a scalar jet."""
        return VecJet([s * c if isinstance(s, Jet) else c * s for c in self.components], self.signature)


def jet_inner(a, b):
    """Jet of the inner product ``(a, b)`` of two germs."""
    if a.signature != b.signature:
        raise SignatureMismatch(f"{a.signature} vs {b.signature}")
    eps = a.signature.metric
    total = None
    for e, x, y in zip(eps, a.components, b.components):
        term = jet_mul(x, y) * e
        total = term if total is None else total + term
    return total


def null_residual(germ):
    """Jet of ``(x', x')``; its value is the pointwise null-constraint residual."""
    if germ.order < 1:
        raise JetOrderError("null residual needs a germ of order >= 1")
    v = germ.diff()
    return jet_inner(v, v)


def _poly_jet(coeffs, tau, order):
    # jet of a polynomial with float coefficients (low degree first)
    tau = np.asarray(tau, dtype=float)
    d = np.zeros((order + 1,) + tau.shape)
    c = list(coeffs)
    for i in range(order + 1):
        d[i] = np.polyval(c[::-1], tau) if c else 0.0
        c = [k * ck for k, ck in enumerate(c)][1:]
    return Jet(d)


def basis_u_r21(tau, order):
    """Germ of the light-cone curve ``u = (1 - t^2, 2t, 1 + t^2)`` in R^{2,1}."""
    comps = [(1.0, 0.0, -1.0), (0.0, 2.0), (1.0, 0.0, 1.0)]
    return VecJet([_poly_jet(c, tau, order) for c in comps], Signature(2, 1))


def basis_uv_r22(tau, order):
    """Germs of the null orthogonal lines ``u = (1, t, 1, -t)``, ``v = (-t, 1, t, 1)``."""
    sig = Signature(2, 2)
    u = VecJet(
        [_poly_jet(c, tau, order) for c in [(1.0,), (0.0, 1.0), (1.0,), (0.0, -1.0)]],
        sig,
    )
    v = VecJet(
        [_poly_jet(c, tau, order) for c in [(0.0, -1.0), (1.0,), (0.0, 1.0), (1.0,)]],
        sig,
    )
    return u, v

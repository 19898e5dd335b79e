"""Runtime defaults, overridable through environment variables."""

import os

DEFAULT_JET_ORDER = 5
DEFAULT_EPS_DEN = 1e-8
SIGMA_MIN_SLOPE = 1e-8


def default_jet_order():
    """Jet order K, from ``NULLFLAT_JET_ORDER`` if set."""
    raw = os.environ.get("NULLFLAT_JET_ORDER")
    if not raw:
        return DEFAULT_JET_ORDER
    k = int(raw)
    if k < 1:
        raise ValueError(f"NULLFLAT_JET_ORDER must be >= 1, got {k}")
    return k


def default_eps_den():
    """Inversion degeneracy threshold, from ``NULLFLAT_EPS_DEN`` if set."""
    raw = os.environ.get("NULLFLAT_EPS_DEN")
    if not raw:
        return DEFAULT_EPS_DEN
    eps = float(raw)
    if not eps > 0:
        raise ValueError(f"NULLFLAT_EPS_DEN must be positive, got {raw}")
    return eps

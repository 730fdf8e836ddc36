"""Gaussian tail helpers.

Q(x) is the upper tail of the standard normal. All functions accept scalars
or numpy arrays and stay accurate in the far tail: ``log_qfunc`` is exact in
log space (no underflow up to x ~ 1e8), which the detection error closed form
relies on when the exponential prefactor is astronomically large.
"""

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri


def qfunc(x):
    """Q(x) = P(N(0,1) > x)."""
    return ndtr(-np.asarray(x, dtype=float)) if np.ndim(x) else float(ndtr(-x))


def qfunc_inv(p):
    """Inverse of Q; relative error < 1e-9 over (0, 1)."""
    return -ndtri(np.asarray(p, dtype=float)) if np.ndim(p) else float(-ndtri(p))


def log_qfunc(x):
    """log Q(x), evaluated without underflow for large x."""
    return log_ndtr(-np.asarray(x, dtype=float)) if np.ndim(x) else float(log_ndtr(-x))

"""Standard normal CDF and inverse CDF kernel.

Every analytic quantity in this package (confusion masses, decision
boundaries, quadrature integrands, inverse-CDF sampling) goes through
these two functions, so their accuracy bounds everything downstream.
scipy's ndtr/ndtri are Cephes implementations with absolute error
below 1e-15 over the full double range.
"""

from __future__ import annotations

import numpy as np
from scipy.special import log_ndtr as _log_ndtr, ndtr as _ndtr, ndtri as _ndtri

__all__ = ["log_norm_cdf", "norm_cdf", "norm_ppf"]


def norm_cdf(x):
    """P(Z <= x) for standard normal Z. Accepts scalars or arrays."""
    return _ndtr(x)


def log_norm_cdf(x):
    """log of norm_cdf, finite far into the left tail where ndtr underflows."""
    return _log_ndtr(x)


def norm_ppf(q):
    """Inverse of norm_cdf. q=0 and q=1 map to -inf and +inf."""
    return _ndtri(q)

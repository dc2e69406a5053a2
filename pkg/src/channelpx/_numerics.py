"""Small numerical helpers shared by the pricers and oracles."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfcx, ndtr

LOG2 = math.log(2.0)
SQRT2 = math.sqrt(2.0)


def log_cosh(z):
    """log(cosh(z)) without overflow for large |z|."""
    a = np.abs(z)
    return a + np.log1p(np.exp(-2.0 * a)) - LOG2


def norm_cdf(z):
    # ndtr is erfc-based and keeps full relative accuracy deep in the lower tail
    return ndtr(z)


def diff_weighted_cdf(coef_plus: float, coef_minus: float, d_plus: float, d_minus: float) -> float:
    """Evaluate ``coef_plus*N(d_plus) - coef_minus*N(d_minus)``.

    Requires ``coef_plus*exp(-d_plus**2/2) == coef_minus*exp(-d_minus**2/2)``,
    which holds for both algebraic forms of the channel call and put. When both
    arguments sit in the lower tail the two terms nearly cancel, so the
    difference is formed from scaled complementary error functions instead.
    """
    if d_plus >= 0.0:
        return coef_plus * float(ndtr(d_plus)) - coef_minus * float(ndtr(d_minus))
    # N(d) = 0.5 * erfcx(-d/sqrt2) * exp(-d^2/2) for d < 0
    scale = coef_plus * math.exp(-0.5 * d_plus * d_plus)
    return 0.5 * scale * float(erfcx(-d_plus / SQRT2) - erfcx(-d_minus / SQRT2))

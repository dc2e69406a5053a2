"""Unattainable-boundary channel model.

The state variable follows ``dX = mu(X) dt + sigma dW`` with the mean-repelling
drift ``mu(x) = nu sigma^2 tanh(nu (x - x*))``. The price ``S = A + B tanh(nu (x - x*))``
is then a bounded martingale that approaches, but never reaches, the channel
edges ``S_minus = A - B`` and ``S_plus = A + B``.

All time arguments are elapsed times ``tau = T - t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from ._numerics import log_cosh
from .errors import (
    InvalidParameters,
    NonpositiveRho,
    NonpositiveTime,
    PriceOutsideChannel,
    QuadratureFailure,
)

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ChannelParams:
    """Parameters of the tanh channel.

    A is the channel center and B its half-width (currency units); nu is the
    stiffness in inverse state units and sigma the state volatility.
    """

    A: float
    B: float
    nu: float
    sigma: float
    x_star: float = 0.0

    def __post_init__(self):
        vals = (self.A, self.B, self.nu, self.sigma, self.x_star)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameters(f"non-finite channel parameter in {vals}")
        if not self.A > self.B > 0.0:
            raise InvalidParameters(f"need A > B > 0, got A={self.A}, B={self.B}")
        if self.nu <= 0.0 or self.sigma <= 0.0:
            raise InvalidParameters(f"need nu > 0 and sigma > 0, got nu={self.nu}, sigma={self.sigma}")

    @property
    def S_minus(self) -> float:
        return self.A - self.B

    @property
    def S_plus(self) -> float:
        return self.A + self.B

    @property
    def mu_star(self) -> float:
        """Asymptotic drift magnitude sigma^2 nu."""
        return self.sigma * self.sigma * self.nu


@dataclass(frozen=True)
class MixtureDecomposition:
    weight_plus: float
    weight_minus: float
    mu_star: float
    gaussian_plus: tuple[float, float]
    gaussian_minus: tuple[float, float]


def _check_tau(tau: float) -> None:
    if not tau > 0.0:
        raise NonpositiveTime(f"elapsed time must be positive, got {tau}")


def _scalar_or_array(a):
    return float(a) if np.ndim(a) == 0 else a


def drift_mu(x, p: ChannelParams):
    return _scalar_or_array(p.nu * p.sigma**2 * np.tanh(p.nu * (np.asarray(x, dtype=float) - p.x_star)))


def s_of_x(x, p: ChannelParams):
    """Price as a function of state; maps the real line onto (S_minus, S_plus)."""
    return _scalar_or_array(p.A + p.B * np.tanh(p.nu * (np.asarray(x, dtype=float) - p.x_star)))


def x_of_s(S, p: ChannelParams):
    """State coordinate for a price strictly inside the channel."""
    S_arr = np.asarray(S, dtype=float)
    if np.any(S_arr <= p.S_minus) or np.any(S_arr >= p.S_plus) or np.any(np.isnan(S_arr)):
        raise PriceOutsideChannel(
            f"price {S} not strictly inside ({p.S_minus}, {p.S_plus})"
        )
    return _scalar_or_array(p.x_star + np.arctanh((S_arr - p.A) / p.B) / p.nu)


def log_density(x, x0: float, tau: float, p: ChannelParams):
    _check_tau(tau)
    x = np.asarray(x, dtype=float)
    var = p.sigma**2 * tau
    return (
        -_LOG_SQRT_2PI
        - 0.5 * math.log(var)
        + log_cosh(p.nu * (x - p.x_star))
        - log_cosh(p.nu * (x0 - p.x_star))
        - (x - x0) ** 2 / (2.0 * var)
        - 0.5 * p.nu**2 * var
    )


def density(x, x0: float, tau: float, p: ChannelParams):
    """Transition density of the state from ``x0`` to ``x`` after ``tau``.

    Evaluated in log space so the cosh ratio survives ``nu*|x| > 700``.
    """
    return _scalar_or_array(np.exp(log_density(x, x0, tau, p)))


def mixture_decomposition(x0: float, tau: float, p: ChannelParams) -> MixtureDecomposition:
    """Split the density into two drifting Gaussians.

    The weights are the probabilities of ending up pushed to the upper and
    lower edge; they depend on x0 only through the current price.
    """
    _check_tau(tau)
    S_t = float(s_of_x(x0, p))
    width = p.S_plus - p.S_minus
    w_plus = (S_t - p.S_minus) / width
    w_minus = 1.0 - w_plus
    var = p.sigma**2 * tau
    shift = p.mu_star * tau
    return MixtureDecomposition(
        weight_plus=w_plus,
        weight_minus=w_minus,
        mu_star=p.mu_star,
        gaussian_plus=(x0 + shift, var),
        gaussian_minus=(x0 - shift, var),
    )


def mixture_density(x, x0: float, tau: float, p: ChannelParams):
    """Density rebuilt from its two-Gaussian decomposition."""
    m = mixture_decomposition(x0, tau, p)
    x = np.asarray(x, dtype=float)

    def gauss(mean, var):
        return np.exp(-((x - mean) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)

    return m.weight_plus * gauss(*m.gaussian_plus) + m.weight_minus * gauss(*m.gaussian_minus)


def zero_mode_martingale(
    mu: Callable[[float], float],
    x: float,
    x_ref: float,
    p: ChannelParams,
    *,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
) -> float:
    """Time-independent martingale for a generic drift, by nested quadrature.

    Returns ``w(x) = int_{x_ref}^{x} C exp(-(2/sigma^2) int_{x_ref}^{u} mu(y) dy) du``
    with C fixed by ``w(x_ref + 1) - w(x_ref) = 1``. Only ``p.sigma`` is used.
    """
    two_over_var = 2.0 / p.sigma**2

    def inner(u: float) -> float:
        val, err = integrate.quad(mu, x_ref, u, epsabs=epsabs, epsrel=epsrel, limit=200)
        return val

    def slope(u: float) -> float:
        return math.exp(-two_over_var * inner(u))

    def outer(a: float, b: float) -> float:
        with np.errstate(all="ignore"):
            val, err = integrate.quad(slope, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)
        if not math.isfinite(val) or err > 1e3 * max(epsabs, epsrel * abs(val)):
            raise QuadratureFailure(f"zero-mode integral on [{a}, {b}] did not converge (err={err})")
        return val

    norm = outer(x_ref, x_ref + 1.0)
    if x == x_ref:
        return 0.0
    return outer(x_ref, x) / norm


def exp_martingale(rho: float, sign: int, x, t, p: ChannelParams):
    """Time-dependent martingale ``exp(sign*lam*x) / cosh(nu (x - x*)) * exp(-rho sigma^2 t / 2)``.

    ``lam = sqrt(rho + nu^2)`` solves the separated equation for the spatial factor.
    """
    if not rho > 0.0:
        raise NonpositiveRho(f"rho must be positive, got {rho}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    lam = math.sqrt(rho + p.nu**2)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    log_w = sign * lam * x - log_cosh(p.nu * (x - p.x_star)) - 0.5 * rho * p.sigma**2 * t
    return _scalar_or_array(np.exp(log_w))


def drift_nonzero_rate(r: float, x, p: ChannelParams):
    """Drift that keeps the channel edges static under a nonzero rate.

    ``r * phi / phi' + mu_tilde`` with ``phi = A + B tanh`` and the tanh drift
    as ``mu_tilde``. Diverges faster than linearly in |x| when r != 0.
    """
    if r == 0.0:
        return drift_mu(x, p)
    z = p.nu * (np.asarray(x, dtype=float) - p.x_star)
    with np.errstate(over="ignore"):
        c2 = np.cosh(z) ** 2
        # phi/phi' = (A + B tanh z) cosh^2 z / (B nu)
        ratio = (p.A * c2 + p.B * np.sinh(z) * np.cosh(z)) / (p.B * p.nu)
    return _scalar_or_array(r * ratio + p.nu * p.sigma**2 * np.tanh(z))

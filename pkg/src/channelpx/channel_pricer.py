"""Closed-form European prices in the tanh channel at zero interest rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._numerics import diff_weighted_cdf, log_cosh, norm_cdf
from .channel_model import ChannelParams, x_of_s
from .errors import InvalidParameters, NegativeTime, PriceOutsideChannel
from .results import PriceResult

KINDS = ("call", "put")


@dataclass(frozen=True)
class OptionSpec:
    strike: float
    tau: float
    kind: str = "call"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"kind must be 'call' or 'put', got {self.kind!r}")
        if not math.isfinite(self.strike) or self.strike <= 0.0:
            raise InvalidParameters(f"strike must be positive and finite, got {self.strike}")
        if not self.tau >= 0.0:
            raise NegativeTime(f"time to maturity must be >= 0, got {self.tau}")


def _check_spot(S_t: float, p: ChannelParams) -> None:
    if not p.S_minus < S_t < p.S_plus:
        raise PriceOutsideChannel(f"spot {S_t} not strictly inside ({p.S_minus}, {p.S_plus})")


def hitting_weights(S_t: float, p: ChannelParams) -> tuple[float, float]:
    """Probabilities of being pushed to the upper and lower edge in the long run."""
    _check_spot(S_t, p)
    w_plus = (S_t - p.S_minus) / (p.S_plus - p.S_minus)
    return w_plus, 1.0 - w_plus


def call_price_asymptotic(S_t: float, K: float, p: ChannelParams) -> float:
    _check_spot(S_t, p)
    w_plus, _ = hitting_weights(S_t, p)
    return w_plus * max(p.S_plus - K, 0.0) if K > p.S_minus else S_t - K


def _d_pm(x0: float, x1: float, tau: float, p: ChannelParams) -> tuple[float, float]:
    s = p.sigma * math.sqrt(tau)
    base = (x0 - x1) / s
    return base + p.nu * s, base - p.nu * s


def _outside_channel(S_t: float, K: float, p: ChannelParams, kind: str) -> PriceResult | None:
    # zero rate: a strike outside the channel makes the exercise decision certain
    if p.S_minus < K < p.S_plus:
        return None
    flag = "strike_at_boundary" if K in (p.S_minus, p.S_plus) else "strike_outside_channel"
    if K >= p.S_plus:
        value = 0.0 if kind == "call" else K - S_t
    else:
        value = S_t - K if kind == "call" else 0.0
    return PriceResult(value, "closed_form", {flag: True})


def _value(S_t: float, K: float, tau: float, p: ChannelParams, form: str, kind: str) -> float:
    x0 = x_of_s(S_t, p)
    x1 = x_of_s(K, p)
    d_plus, d_minus = _d_pm(x0, x1, tau, p)
    if form == "edges":
        width = p.S_plus - p.S_minus
        c_plus = (S_t - p.S_minus) * (p.S_plus - K) / width
        c_minus = (p.S_plus - S_t) * (K - p.S_minus) / width
    elif form == "cosh":
        u0 = p.nu * (x0 - p.x_star)
        u1 = p.nu * (x1 - p.x_star)
        log_den = math.log(2.0) + log_cosh(u0) + log_cosh(u1)
        c_plus = p.B * math.exp((u0 - u1) - log_den)
        c_minus = p.B * math.exp(-(u0 - u1) - log_den)
    else:
        raise ValueError(f"form must be 'edges' or 'cosh', got {form!r}")
    if kind == "call":
        v = diff_weighted_cdf(c_plus, c_minus, d_plus, d_minus)
    else:
        # c+ - c- = S_t - K, so this is parity-consistent with the call
        v = diff_weighted_cdf(c_minus, c_plus, -d_minus, -d_plus)
    return max(v, 0.0)


def _price(S_t: float, spec: OptionSpec, p: ChannelParams, form: str, kind: str) -> PriceResult:
    _check_spot(S_t, p)
    K = spec.strike
    outside = _outside_channel(S_t, K, p, kind)
    if outside is not None:
        return outside
    if spec.tau == 0.0:
        intrinsic = S_t - K if kind == "call" else K - S_t
        return PriceResult(max(intrinsic, 0.0), "closed_form", {"intrinsic": True})
    return PriceResult(_value(S_t, K, spec.tau, p, form, kind), "closed_form", {"form": form})


def call_price(S_t: float, spec: OptionSpec, p: ChannelParams, *, form: str = "edges") -> PriceResult:
    """European call in the channel.

    ``form="edges"`` writes the price through the channel edges and is the
    production path; ``form="cosh"`` keeps the cosh-ratio form for cross-checks.
    """
    return _price(S_t, spec, p, form, "call")


def put_price(S_t: float, spec: OptionSpec, p: ChannelParams, *, form: str = "edges") -> PriceResult:
    """European put, ``call - S_t + K`` at zero rate.

    Evaluated from the mirrored weighted-CDF difference rather than by
    subtraction, so out-of-the-money puts keep full relative accuracy.
    """
    return _price(S_t, spec, p, form, "put")


def price(S_t: float, spec: OptionSpec, p: ChannelParams, *, form: str = "edges") -> PriceResult:
    fn = call_price if spec.kind == "call" else put_price
    return fn(S_t, spec, p, form=form)


def call_delta(S_t: float, spec: OptionSpec, p: ChannelParams) -> float:
    """dVc/dS_t.

    The density terms from differentiating d+ and d- cancel exactly, leaving
    a weighted average of N(d+) and N(d-).
    """
    _check_spot(S_t, p)
    K = spec.strike
    if K >= p.S_plus:
        return 0.0
    if K <= p.S_minus:
        return 1.0
    if spec.tau == 0.0:
        return 1.0 if S_t > K else 0.0
    x0 = x_of_s(S_t, p)
    x1 = x_of_s(K, p)
    d_plus, d_minus = _d_pm(x0, x1, spec.tau, p)
    width = p.S_plus - p.S_minus
    return ((p.S_plus - K) * float(norm_cdf(d_plus)) + (K - p.S_minus) * float(norm_cdf(d_minus))) / width


def put_delta(S_t: float, spec: OptionSpec, p: ChannelParams) -> float:
    return call_delta(S_t, spec, p) - 1.0

"""Attainable reflecting boundaries: channel options as double-barrier claims.

Touching either boundary is an arbitrage event, so the channel call dies at
the lower boundary and is exercised at the upper one. It is therefore a
double-knock-out call plus a rebate of (upper - K) paid on touching the
upper boundary first. The put is the mirror image.

Underlying dynamics are geometric Brownian motion with cost of carry ``b``.
Knock-out prices use the flat-barrier image series (fast for short
maturities) with a sine-eigenfunction series as fallback. One-touch prices
use the eigenfunction series, falling back to the finite-difference solver
when ``sigma^2 tau`` is too small for it to converge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr

from .errors import InvalidParameters, InvalidStrike, NonpositiveTime, SeriesNotConverged
from .results import PriceResult

TERM_TOL = 1e-12
MAX_IMAGES = 32
MAX_MODES = 512
SMALL_VAR_TAU = 1e-4
FALLBACK_GRID = (4001, 800)


@dataclass(frozen=True)
class BarrierMarket:
    spot: float
    sigma_gbm: float
    r: float
    b: float
    lower: float
    upper: float

    def __post_init__(self):
        vals = (self.spot, self.sigma_gbm, self.r, self.b, self.lower, self.upper)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameters(f"non-finite market parameter in {vals}")
        if not 0.0 < self.lower < self.upper:
            raise InvalidParameters(f"need 0 < lower < upper, got {self.lower}, {self.upper}")
        if not self.lower <= self.spot <= self.upper:
            raise InvalidParameters(f"spot {self.spot} outside [{self.lower}, {self.upper}]")
        if self.sigma_gbm <= 0.0:
            raise InvalidParameters(f"sigma_gbm must be positive, got {self.sigma_gbm}")

    @property
    def log_width(self) -> float:
        return math.log(self.upper / self.lower)

    def with_spot(self, spot: float) -> "BarrierMarket":
        return BarrierMarket(spot, self.sigma_gbm, self.r, self.b, self.lower, self.upper)


def _check(mkt: BarrierMarket, tau: float, K: float | None = None) -> None:
    if not tau > 0.0:
        raise NonpositiveTime(f"time to maturity must be positive, got {tau}")
    if K is not None and not mkt.lower < K < mkt.upper:
        raise InvalidStrike(f"strike {K} not inside ({mkt.lower}, {mkt.upper})")


def _ndiff(a: float, b: float) -> float:
    """N(a) - N(b), computed on the side of zero that avoids cancellation."""
    if a > 0.0 and b > 0.0:
        return float(ndtr(-b) - ndtr(-a))
    return float(ndtr(a) - ndtr(b))


# image series ---------------------------------------------------------------


def _image_sums(mkt: BarrierMarket, K: float, tau: float, kind: str):
    """Sums over images n = 0, +-1, +-2, ... for the knock-out call or put.

    Returns (value, images_used, first_neglected_term).
    """
    S, L, U = mkt.spot, mkt.lower, mkt.upper
    sig = mkt.sigma_gbm
    sq = sig * math.sqrt(tau)
    mu1 = 2.0 * mkt.b / sig**2 + 1.0
    drift = (mkt.b + 0.5 * sig**2) * tau
    lnS, lnL, lnU, lnK = math.log(S), math.log(L), math.log(U), math.log(K)
    fwd = S * math.exp((mkt.b - mkt.r) * tau)
    disc = K * math.exp(-mkt.r * tau)

    def term(n: int) -> float:
        # direct images: S U^2n / L^2n ; reflected images: L^(2n+2) / (S U^2n)
        ln_dir = lnS + 2 * n * (lnU - lnL)
        ln_ref = (2 * n + 2) * lnL - lnS - 2 * n * lnU
        ln_w_dir = n * (lnU - lnL)
        ln_w_ref = (n + 1) * lnL - n * lnU - lnS
        # S_T is integrated over (lo, hi): (K, U) for the call, (L, K) for the put
        lo, hi = (lnK, lnU) if kind == "call" else (lnL, lnK)
        d1 = (ln_dir - lo + drift) / sq
        d2 = (ln_dir - hi + drift) / sq
        d3 = (ln_ref - lo + drift) / sq
        d4 = (ln_ref - hi + drift) / sq
        asset = math.exp(mu1 * ln_w_dir) * _ndiff(d1, d2) - math.exp(mu1 * ln_w_ref) * _ndiff(d3, d4)
        cash = math.exp((mu1 - 2.0) * ln_w_dir) * _ndiff(d1 - sq, d2 - sq) - math.exp(
            (mu1 - 2.0) * ln_w_ref
        ) * _ndiff(d3 - sq, d4 - sq)
        return fwd * asset - disc * cash

    total = term(0)
    n_used = 0
    for n in range(1, MAX_IMAGES + 1):
        pair = term(n) + term(-n)
        total += pair
        n_used = n
        if abs(pair) < TERM_TOL:
            break
    neglected = abs(term(n_used + 1)) + abs(term(-n_used - 1))
    if kind == "put":
        # put = K * cash - S * asset
        total = -total
    return total, n_used, neglected


# eigenfunction series --------------------------------------------------------


def _eigen_setup(mkt: BarrierMarket, reverse: bool):
    sig2 = mkt.sigma_gbm**2
    m = mkt.b - 0.5 * sig2
    if reverse:
        m = -m
    a = -m / sig2
    theta2 = (m * m + 2.0 * mkt.r * sig2) / (sig2 * sig2)
    return m, a, theta2


def _g_ratio(x: float, Z: float, theta2: float) -> float:
    """g(x)/g(Z) with g = sinh(theta x)/theta continued to theta^2 <= 0."""
    if theta2 > 1e-14:
        th = math.sqrt(theta2)
        return math.exp(th * (x - Z)) * (-math.expm1(-2.0 * th * x)) / (-math.expm1(-2.0 * th * Z))
    if theta2 < -1e-14:
        th = math.sqrt(-theta2)
        return math.sin(th * x) / math.sin(th * Z)
    return x / Z


def _one_touch_eigen(mkt: BarrierMarket, tau: float, reverse: bool):
    """Unit paid on first touch of the far barrier (upper, or lower if reversed)."""
    Z = mkt.log_width
    x = math.log(mkt.upper / mkt.spot) if reverse else math.log(mkt.spot / mkt.lower)
    m, a, theta2 = _eigen_setup(mkt, reverse)
    half_var = 0.5 * mkt.sigma_gbm**2 * tau
    steady = _g_ratio(x, Z, theta2)
    total = 0.0
    bound = math.inf
    used = 0
    for i in range(1, MAX_MODES + 1):
        k = i * math.pi / Z
        decay = math.exp(-half_var * (k * k + theta2))
        coef = (2.0 / Z) * k / (theta2 + k * k)
        sgn = -1.0 if i % 2 else 1.0
        total += sgn * coef * math.sin(k * x) * decay
        used = i
        bound = coef * decay
        if bound < TERM_TOL and i >= 2:
            break
    k = (used + 1) * math.pi / Z
    neglected = (2.0 / Z) * k / (theta2 + k * k) * math.exp(-half_var * (k * k + theta2))
    value = math.exp(a * (x - Z)) * (steady + total)
    return value, used, neglected * math.exp(abs(a) * Z), bound < TERM_TOL


def _exp_sine_integral(beta: float, k: float, p: float, q: float) -> float:
    """Integral of exp(beta x) sin(k x) over [p, q]."""

    def F(x):
        return math.exp(beta * x) * (beta * math.sin(k * x) - k * math.cos(k * x)) / (beta * beta + k * k)

    return F(q) - F(p)


def _dko_eigen(mkt: BarrierMarket, K: float, tau: float, kind: str):
    L = mkt.lower
    Z = mkt.log_width
    x = math.log(mkt.spot / L)
    xk = math.log(K / L)
    m, a, theta2 = _eigen_setup(mkt, reverse=False)
    half_var = 0.5 * mkt.sigma_gbm**2 * tau
    # crude L1 bound of the transformed payoff, for the truncation envelope
    scale = (2.0 / Z) * Z * max(mkt.upper, K) * math.exp(abs(a) * Z)
    total = 0.0
    used = 0
    converged = False
    for i in range(1, MAX_MODES + 1):
        k = i * math.pi / Z
        if kind == "call":
            c = L * _exp_sine_integral(1.0 - a, k, xk, Z) - K * _exp_sine_integral(-a, k, xk, Z)
        else:
            c = K * _exp_sine_integral(-a, k, 0.0, xk) - L * _exp_sine_integral(1.0 - a, k, 0.0, xk)
        decay = math.exp(-half_var * (k * k + theta2))
        total += (2.0 / Z) * c * math.sin(k * x) * decay
        used = i
        if scale * decay < TERM_TOL and i >= 2:
            converged = True
            break
    k = (used + 1) * math.pi / Z
    neglected = scale * math.exp(-half_var * (k * k + theta2)) * math.exp(abs(a) * Z)
    return math.exp(a * x) * total, used, neglected, converged


# PDE fallback ----------------------------------------------------------------


def _pde_fallback(problem, mkt: BarrierMarket, tau: float, reason: str) -> PriceResult:
    from .oracles.pde import pde_solve

    sol = pde_solve(problem, mkt, tau, FALLBACK_GRID)
    diag = {"fallback": reason, "engine": "crank_nicolson", "grid": list(FALLBACK_GRID)}
    return PriceResult(sol.at(mkt.spot), "quadrature", diag)


# public API ------------------------------------------------------------------


def _settled(value: float, barrier: str) -> PriceResult:
    return PriceResult(value, "closed_form", {"settled": True, "barrier": barrier})


def _dko(mkt: BarrierMarket, K: float, tau: float, kind: str, allow_fallback: bool) -> PriceResult:
    _check(mkt, tau, K)
    if mkt.spot <= mkt.lower:
        return _settled(0.0, "lower")
    if mkt.spot >= mkt.upper:
        return _settled(0.0, "upper")
    value, n_used, neglected = _image_sums(mkt, K, tau, kind)
    if neglected < TERM_TOL:
        return PriceResult(
            max(value, 0.0), "series", {"expansion": "images", "terms": n_used, "truncation_bound": neglected}
        )
    value, m_used, neglected, ok = _dko_eigen(mkt, K, tau, kind)
    if ok:
        return PriceResult(
            max(value, 0.0), "series", {"expansion": "eigen", "terms": m_used, "truncation_bound": neglected}
        )
    if not allow_fallback:
        raise SeriesNotConverged(f"knock-out {kind} series did not converge (bound {neglected:.3g})")
    from .oracles.pde import BoundaryValueProblem

    problem = BoundaryValueProblem.dko_call(K) if kind == "call" else BoundaryValueProblem.dko_put(K)
    return _pde_fallback(problem, mkt, tau, "series_not_converged")


def dko_call(mkt: BarrierMarket, K: float, tau: float, *, allow_fallback: bool = True) -> PriceResult:
    """Double-knock-out call: pays (S_T - K)+ unless either barrier is touched."""
    return _dko(mkt, K, tau, "call", allow_fallback)


def dko_put(mkt: BarrierMarket, K: float, tau: float, *, allow_fallback: bool = True) -> PriceResult:
    return _dko(mkt, K, tau, "put", allow_fallback)


def _one_touch(mkt: BarrierMarket, tau: float, upper: bool, allow_fallback: bool) -> PriceResult:
    _check(mkt, tau)
    if mkt.spot >= mkt.upper:
        return _settled(1.0 if upper else 0.0, "upper")
    if mkt.spot <= mkt.lower:
        return _settled(0.0 if upper else 1.0, "lower")
    from .oracles.pde import BoundaryValueProblem

    problem = BoundaryValueProblem.one_touch_upper() if upper else BoundaryValueProblem.one_touch_lower()
    if mkt.sigma_gbm**2 * tau < SMALL_VAR_TAU:
        if not allow_fallback:
            raise SeriesNotConverged("sigma^2 tau below the eigen-series range")
        return _pde_fallback(problem, mkt, tau, "small_variance")
    value, used, neglected, ok = _one_touch_eigen(mkt, tau, reverse=not upper)
    if not ok:
        if not allow_fallback:
            raise SeriesNotConverged(f"one-touch series did not converge in {MAX_MODES} modes")
        return _pde_fallback(problem, mkt, tau, "series_not_converged")
    value = min(max(value, 0.0), 1.0)
    return PriceResult(value, "series", {"expansion": "eigen", "terms": used, "truncation_bound": neglected})


def one_touch_upper(mkt: BarrierMarket, tau: float, *, allow_fallback: bool = True) -> PriceResult:
    """Pays 1 at the first touch of the upper barrier, void if the lower one is touched first."""
    return _one_touch(mkt, tau, True, allow_fallback)


def one_touch_lower(mkt: BarrierMarket, tau: float, *, allow_fallback: bool = True) -> PriceResult:
    return _one_touch(mkt, tau, False, allow_fallback)


def _combine(knockout: PriceResult, touch: PriceResult, rebate: float) -> PriceResult:
    diag = {
        "dko": knockout.price,
        "one_touch": touch.price,
        "rebate": rebate,
        "dko_diag": knockout.diag,
        "one_touch_diag": touch.diag,
    }
    methods = {knockout.method, touch.method}
    method = "quadrature" if "quadrature" in methods else ("series" if "series" in methods else "closed_form")
    if knockout.diag.get("settled") and touch.diag.get("settled"):
        diag["settled"] = True
    return PriceResult(knockout.price + rebate * touch.price, method, diag)


def channel_call(mkt: BarrierMarket, K: float, tau: float) -> PriceResult:
    """Call on a stock bouncing between reflecting boundaries.

    Knocked out at the lower boundary, exercised automatically at the upper.
    """
    _check(mkt, tau, K)
    return _combine(dko_call(mkt, K, tau), one_touch_upper(mkt, tau), mkt.upper - K)


def channel_put(mkt: BarrierMarket, K: float, tau: float) -> PriceResult:
    _check(mkt, tau, K)
    return _combine(dko_put(mkt, K, tau), one_touch_lower(mkt, tau), K - mkt.lower)

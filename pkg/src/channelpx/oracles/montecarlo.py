"""Seeded Monte Carlo engines for the channel SDE and for GBM between barriers.

Paths are simulated in fixed-size blocks. Block ``j`` draws its normals from
``PCG64DXSM(seed).jumped(j)``, so any block can be reproduced without
running the others and the estimate does not depend on execution order.
Normals are drawn in chunks of steps for the paths still alive, which keeps
memory bounded and lets knocked-out paths stop consuming random numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from ..barrier_pricer import BarrierMarket
from ..channel_model import ChannelParams, s_of_x, x_of_s
from ..channel_pricer import OptionSpec, _check_spot
from ..errors import InvalidParameters

CHUNK_STEPS = 64
BARRIER_CLAIMS = (
    "dko_call",
    "dko_put",
    "one_touch_upper",
    "one_touch_lower",
    "channel_call",
    "channel_put",
)
# skip the bridge exponential once the crossing probability is below exp(-50)
_BRIDGE_CUTOFF = 50.0


@dataclass(frozen=True)
class McConfig:
    paths: int = 100_000
    steps: int = 256  # per unit time
    seed: int = 20200525
    bridge_correction: bool = True
    block_size: int = 1 << 14

    def __post_init__(self):
        if self.paths < 1 or self.steps < 1 or self.block_size < 1:
            raise InvalidParameters(f"paths, steps and block_size must be >= 1: {self}")
        if not 0 <= self.seed < 2**64:
            raise InvalidParameters(f"seed must fit in 64 bits, got {self.seed}")

    def n_steps(self, tau: float) -> int:
        return max(1, math.ceil(self.steps * tau - 1e-9))

    def blocks(self):
        """Yield (block index, paths in block, generator)."""
        base = np.random.PCG64DXSM(self.seed)
        for j, start in enumerate(range(0, self.paths, self.block_size)):
            n = min(self.block_size, self.paths - start)
            yield j, n, np.random.Generator(base.jumped(j))


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    paths_used: int
    hit_stats: tuple[int, int, int] | None = None  # (upper hits, lower hits, expiries)
    extra: dict = field(default_factory=dict)


def _estimate(samples: np.ndarray, hit_stats=None, **extra) -> McEstimate:
    n = samples.size
    mean = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return McEstimate(mean, se, n, hit_stats, dict(extra))


# channel SDE -----------------------------------------------------------------


def _euler_chunk(x, z, dt, p: ChannelParams):
    # vectorised across paths; numpy's SIMD tanh beats a scalar loop here
    a = p.nu * p.sigma**2 * dt
    b = p.sigma * math.sqrt(dt)
    for zs in z:
        x += a * np.tanh(p.nu * (x - p.x_star)) + b * zs


def simulate_channel_terminal(x0: float, tau: float, p: ChannelParams, cfg: McConfig) -> np.ndarray:
    """Euler-Maruyama terminal states of the channel SDE, in path order."""
    n_total = cfg.n_steps(tau)
    dt = tau / n_total
    out = np.empty(cfg.paths)
    start = 0
    for _, n, gen in cfg.blocks():
        x = np.full(n, x0)
        done = 0
        while done < n_total:
            c = min(CHUNK_STEPS, n_total - done)
            _euler_chunk(x, gen.standard_normal((c, n)), dt, p)
            done += c
        out[start : start + n] = x
        start += n
    return out


def mc_channel(S_t: float, spec: OptionSpec, p: ChannelParams, cfg: McConfig) -> McEstimate:
    """Monte Carlo price of a European option in the channel model.

    ``extra["price_mean"]`` holds the sample mean of the terminal price
    (with its own standard error) for the martingale check.
    """
    _check_spot(S_t, p)
    x0 = x_of_s(S_t, p)
    if spec.tau == 0.0:
        x_T = np.full(cfg.paths, x0)
    else:
        x_T = simulate_channel_terminal(x0, spec.tau, p, cfg)
    S_T = s_of_x(x_T, p)
    payoff = np.maximum(S_T - spec.strike, 0.0) if spec.kind == "call" else np.maximum(spec.strike - S_T, 0.0)
    price_est = _estimate(S_T)
    return _estimate(
        payoff,
        price_mean=price_est.value,
        price_mean_std_error=price_est.std_error,
        steps=cfg.n_steps(spec.tau),
    )


# GBM between barriers ---------------------------------------------------------


@numba.njit(cache=True)
def _barrier_chunk(
    x, alive, outcome, t_hit, z, n_steps, step0, dt, drift, vol, lo, hi, bridge, mt_seed
):
    np.random.seed(mt_seed)
    inv = 2.0 / (vol * vol * dt)
    sd = vol * math.sqrt(dt)
    for j in range(alive.size):
        i = alive[j]
        xi = x[i]
        for s in range(n_steps):
            xn = xi + drift * dt + sd * z[j, s]
            t_mid = (step0 + s + 0.5) * dt
            if xn <= lo:
                outcome[i] = 2
                t_hit[i] = t_mid
                break
            if xn >= hi:
                outcome[i] = 1
                t_hit[i] = t_mid
                break
            if bridge:
                e_lo = inv * (xi - lo) * (xn - lo)
                e_hi = inv * (hi - xi) * (hi - xn)
                if e_lo < _BRIDGE_CUTOFF or e_hi < _BRIDGE_CUTOFF:
                    p_lo = math.exp(-e_lo) if e_lo < _BRIDGE_CUTOFF else 0.0
                    p_hi = math.exp(-e_hi) if e_hi < _BRIDGE_CUTOFF else 0.0
                    u = np.random.random()
                    if u < p_lo:
                        outcome[i] = 2
                        t_hit[i] = t_mid
                        break
                    if u < p_lo + p_hi:
                        outcome[i] = 1
                        t_hit[i] = t_mid
                        break
            xi = xn
        x[i] = xi


@dataclass(frozen=True)
class BarrierPaths:
    """Per-path outcome: 0 survived to expiry, 1 hit upper, 2 hit lower."""

    outcome: np.ndarray
    t_hit: np.ndarray
    S_T: np.ndarray
    tau: float
    n_steps: int

    @property
    def hit_stats(self) -> tuple[int, int, int]:
        counts = np.bincount(self.outcome, minlength=3)
        return int(counts[1]), int(counts[2]), int(counts[0])


def _mt_seed(seed: int, block: int, chunk: int) -> int:
    return int(np.random.SeedSequence([seed, block, chunk]).generate_state(1)[0])


def simulate_barrier(mkt: BarrierMarket, tau: float, cfg: McConfig) -> BarrierPaths:
    """Simulate log-GBM with exact Gaussian steps until a barrier is touched.

    With ``bridge_correction`` a between-step touch is sampled from the
    Brownian-bridge crossing probability. Touch times are recorded at the
    step midpoint.
    """
    n_total = cfg.n_steps(tau)
    dt = tau / n_total
    sig = mkt.sigma_gbm
    drift = mkt.b - 0.5 * sig * sig
    lo, hi = math.log(mkt.lower), math.log(mkt.upper)
    outcome = np.zeros(cfg.paths, dtype=np.int64)
    t_hit = np.full(cfg.paths, np.nan)
    x_all = np.full(cfg.paths, math.log(mkt.spot))
    if mkt.spot >= mkt.upper or mkt.spot <= mkt.lower:
        outcome[:] = 1 if mkt.spot >= mkt.upper else 2
        t_hit[:] = 0.0
        return BarrierPaths(outcome, t_hit, np.exp(x_all), tau, n_total)
    start = 0
    for j, n, gen in cfg.blocks():
        sl = slice(start, start + n)
        x, out, th = x_all[sl], outcome[sl], t_hit[sl]
        alive = np.arange(n)
        done = 0
        chunk = 0
        while done < n_total and alive.size:
            c = min(CHUNK_STEPS, n_total - done)
            z = gen.standard_normal((alive.size, c))
            _barrier_chunk(
                x, alive, out, th, z, c, done, dt, drift, sig, lo, hi,
                cfg.bridge_correction, _mt_seed(cfg.seed, j, chunk),
            )
            alive = alive[out[alive] == 0]
            done += c
            chunk += 1
        start += n
    return BarrierPaths(outcome, t_hit, np.exp(x_all), tau, n_total)


def barrier_payoffs(paths: BarrierPaths, mkt: BarrierMarket, K: float, claim: str) -> np.ndarray:
    """Discounted per-path payoffs of one claim."""
    r = mkt.r
    survived = paths.outcome == 0
    disc_T = math.exp(-r * paths.tau)
    if claim in ("dko_call", "channel_call"):
        dko = np.where(survived, disc_T * np.maximum(paths.S_T - K, 0.0), 0.0)
    elif claim in ("dko_put", "channel_put"):
        dko = np.where(survived, disc_T * np.maximum(K - paths.S_T, 0.0), 0.0)
    else:
        dko = None
    with np.errstate(invalid="ignore"):
        touch_up = np.where(paths.outcome == 1, np.exp(-r * paths.t_hit), 0.0)
        touch_dn = np.where(paths.outcome == 2, np.exp(-r * paths.t_hit), 0.0)
    if claim in ("dko_call", "dko_put"):
        return dko
    if claim == "one_touch_upper":
        return touch_up
    if claim == "one_touch_lower":
        return touch_dn
    if claim == "channel_call":
        return dko + (mkt.upper - K) * touch_up
    if claim == "channel_put":
        return dko + (K - mkt.lower) * touch_dn
    raise InvalidParameters(f"unknown barrier claim {claim!r}; expected one of {BARRIER_CLAIMS}")


def barrier_estimates(
    paths: BarrierPaths, mkt: BarrierMarket, K: float, claims=BARRIER_CLAIMS
) -> dict[str, McEstimate]:
    """Estimates for several claims priced off one set of paths."""
    return {
        c: _estimate(barrier_payoffs(paths, mkt, K, c), paths.hit_stats, steps=paths.n_steps)
        for c in claims
    }


def mc_barrier(mkt: BarrierMarket, claim: str, K: float, tau: float, cfg: McConfig) -> McEstimate:
    if claim not in BARRIER_CLAIMS:
        raise InvalidParameters(f"unknown barrier claim {claim!r}; expected one of {BARRIER_CLAIMS}")
    paths = simulate_barrier(mkt, tau, cfg)
    return barrier_estimates(paths, mkt, K, (claim,))[claim]

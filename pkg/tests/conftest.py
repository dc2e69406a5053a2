from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.stats import norm

from channelpx import BarrierMarket, ChannelParams


@pytest.fixture
def default_params() -> ChannelParams:
    return ChannelParams(A=100.0, B=20.0, nu=1.0, sigma=0.2)


@pytest.fixture
def std_market() -> BarrierMarket:
    return BarrierMarket(spot=100.0, sigma_gbm=0.25, r=0.02, b=0.02, lower=80.0, upper=120.0)


def mp_call_price(S_t, K, tau, p: ChannelParams, dps: int = 30) -> float:
    """High-precision reference: integrate the transition density against the payoff."""
    with mp.workdps(dps):
        A, B, nu, sig = (mp.mpf(v) for v in (p.A, p.B, p.nu, p.sigma))
        x0 = mp.atanh((mp.mpf(S_t) - A) / B) / nu
        x1 = mp.atanh((mp.mpf(K) - A) / B) / nu
        var = sig**2 * tau

        def integrand(x):
            dens = (
                mp.cosh(nu * x) / mp.cosh(nu * x0)
                * mp.exp(-((x - x0) ** 2) / (2 * var) - nu**2 * var / 2)
                / mp.sqrt(2 * mp.pi * var)
            )
            return dens * (A + B * mp.tanh(nu * x) - K)

        # in the far tail the integrand decays on the scale var/|x1 - x0|, so the
        # panels shrink with the distance between spot and strike
        sd = mp.sqrt(var)
        step = sd / 4 / (1 + abs(x1 - x0) / sd)
        hi = max(x1, x0 + nu * var) + 40 * sd
        n = min(2000, int((hi - x1) / step) + 1)
        return float(mp.quad(integrand, mp.linspace(x1, hi, n + 1)))


def bs_price(S, K, tau, r, b, sigma, kind="call") -> float:
    """Generalised Black-Scholes-Merton price with cost of carry b."""
    sd = sigma * math.sqrt(tau)
    d1 = (math.log(S / K) + (b + 0.5 * sigma**2) * tau) / sd
    d2 = d1 - sd
    carry, disc = math.exp((b - r) * tau), math.exp(-r * tau)
    if kind == "call":
        return S * carry * norm.cdf(d1) - K * disc * norm.cdf(d2)
    return K * disc * norm.cdf(-d2) - S * carry * norm.cdf(-d1)


def random_channel_cases(n: int, seed: int = 7):
    """Random parameter sets spanning the acceptance ranges, spot and strike interior."""
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(n):
        A = rng.uniform(50, 150)
        B = A * rng.uniform(0.05, 0.4)
        nu = rng.uniform(0.2, 5)
        sigma = rng.uniform(0.05, 0.6)
        tau = rng.uniform(0.05, 10)
        S = A - B + 2 * B * rng.uniform(0.05, 0.95)
        K = A - B + 2 * B * rng.uniform(0.05, 0.95)
        cases.append((ChannelParams(A, B, nu, sigma), S, K, tau))
    return cases


# acceptance reporting ----------------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Log one PASS/FAIL line per acceptance criterion and echo it to stdout."""

    def record(number: int, title: str, passed: bool, detail: str, runtime: float | None = None) -> None:
        timing = "" if runtime is None else f" [{runtime:.2f} s]"
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title}: {detail}{timing}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

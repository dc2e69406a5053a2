"""Single-step binomial pricing and the reflecting-boundary arbitrage."""

from __future__ import annotations

import math

from ..errors import DegenerateBranch


def binomial_claim_price(
    S_now: float, S_up: float, S_down: float, f_up: float, f_down: float, r: float, dt: float
) -> tuple[float, float, bool]:
    """Replication value of a one-step claim.

    Returns ``(f_now, q, arbitrage)``; ``arbitrage`` is set when the implied
    up-probability falls outside (0, 1), i.e. the grown spot is not strictly
    between the two branches.
    """
    if S_up == S_down:
        raise DegenerateBranch("up and down prices coincide")
    if S_up < S_down:
        raise DegenerateBranch(f"need S_down < S_up, got S_down={S_down}, S_up={S_up}")
    growth = math.exp(r * dt)
    q = (growth * S_now - S_down) / (S_up - S_down)
    f_now = (q * f_up + (1.0 - q) * f_down) / growth
    arbitrage = not (S_down < growth * S_now < S_up)
    return f_now, q, arbitrage


def detect_boundary_arbitrage(S_now: float, S_up: float, r: float, dt: float) -> float:
    """Profit from borrowing S_now and buying at a reflecting lower boundary.

    Positive means riskless profit; the raw value is returned even when it is
    negative (large dt with r > 0).
    """
    return S_up - math.exp(r * dt) * S_now


def detect_upper_boundary_arbitrage(S_now: float, S_down: float, r: float, dt: float) -> float:
    """Mirror case at a reflecting upper boundary: short the stock, hold the bond."""
    return math.exp(r * dt) * S_now - S_down

"""
Why a reflecting floor is an arbitrage
======================================

At a reflecting lower boundary the price can only move up. In a one-step
tree that means the down branch is no lower than the grown spot, the
risk-neutral probability leaves (0, 1) and borrowing to buy the stock is a
riskless profit.
"""

import math

from channelpx.oracles import binomial_claim_price, detect_boundary_arbitrage

s_now, s_up, r, dt = 80.0, 81.0, 0.05, 0.01
grown = math.exp(r * dt) * s_now

###############################################################################
# An interior node with a genuine down move prices consistently.
f, q, arb = binomial_claim_price(s_now, grown + 1.0, grown - 1.0, grown + 1.0, grown - 1.0, r, dt)
print(f"interior node: q = {q:.3f}, stock prices itself: {f:.6f}, arbitrage flagged: {arb}")

###############################################################################
# At the floor the down branch collapses and the flag goes up.
_, q, arb = binomial_claim_price(s_now, s_up, grown, 1.0, 0.0, r, dt)
print(f"floor node:    q = {q:.3f}, arbitrage flagged: {arb}")
print(f"profit from borrowing {s_now} and selling at {s_up}: {detect_boundary_arbitrage(s_now, s_up, r, dt):.5f}")

###############################################################################
# Holding long enough lets the bond catch up, so the profit turns negative.
for horizon in (0.01, 0.1, 0.5, 1.0):
    print(f"  dt = {horizon:4.2f}: {detect_boundary_arbitrage(s_now, s_up, r, horizon):+.4f}")

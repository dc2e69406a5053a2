"""
Channel options with reflecting boundaries
==========================================

When the price can touch the channel edges, a call is knocked out at the
lower edge and exercised at the upper one. Its value is a double-knock-out
call plus (upper - K) one-touch binaries. The script prints both pieces
across spots and checks the sum against a finite-difference solution of the
same boundary-value problem.
"""

import numpy as np

from channelpx import BarrierMarket, channel_call, channel_put
from channelpx.oracles import BoundaryValueProblem, pde_solve

mkt = BarrierMarket(spot=100.0, sigma_gbm=0.25, r=0.02, b=0.02, lower=80.0, upper=120.0)
K, tau = 100.0, 0.5

###############################################################################
# One PDE solve covers every spot.
surface = pde_solve(BoundaryValueProblem.channel_call(K, mkt.upper), mkt, tau, (2000, 2000))

print(f"{'spot':>7} {'dko':>10} {'touch':>8} {'call':>10} {'pde':>10} {'put':>10}")
for spot in np.linspace(80.0, 120.0, 11):
    m = mkt.with_spot(float(spot))
    call = channel_call(m, K, tau)
    put = channel_put(m, K, tau)
    d = call.diag
    print(f"{spot:7.1f} {d['dko']:10.6f} {d['one_touch']:8.5f} {call.price:10.6f} "
          f"{surface.at(spot):10.6f} {put.price:10.6f}")

###############################################################################
# At the edges the values are settlements: 0 at the lower edge and
# upper - K = 20 at the upper edge for the call.

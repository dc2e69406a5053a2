"""
Call prices in an unattainable channel
======================================

A price that can never leave (80, 120) is eventually pushed against one of
the two edges. This script prices a call at growing maturities and shows the
value settling on the long-run limit, the probability of ending at the upper
edge times the payoff there.
"""

import numpy as np

from channelpx import (
    ChannelParams,
    OptionSpec,
    call_price,
    call_price_asymptotic,
    hitting_weights,
    mixture_decomposition,
    x_of_s,
)

p = ChannelParams(A=100.0, B=20.0, nu=1.0, sigma=0.2)
spot, strike = 100.0, 110.0

###############################################################################
# The long-run limit depends on the spot only through the hitting weights.
w_plus, w_minus = hitting_weights(spot, p)
limit = call_price_asymptotic(spot, strike, p)
print(f"weights: upper {w_plus:.3f}, lower {w_minus:.3f}; long-run call value {limit:.6f}")

###############################################################################
# Price along a geometric maturity grid. The crossover scale is 1/(sigma nu)^2.
crossover = 1.0 / (p.sigma * p.nu) ** 2
print(f"\n{'tau':>10} {'call':>14} {'gap to limit':>14}")
for tau in np.geomspace(0.01, 400 * crossover, 13):
    value = call_price(spot, OptionSpec(strike, tau), p).price
    print(f"{tau:10.3g} {value:14.8f} {limit - value:14.3e}")

###############################################################################
# The transition density is a pair of Gaussians drifting apart at speed
# sigma^2 nu, weighted by the same hitting probabilities.
m = mixture_decomposition(x_of_s(spot, p), 25.0, p)
print(f"\nat tau=25: means {m.gaussian_minus[0]:+.2f} and {m.gaussian_plus[0]:+.2f}, "
      f"variance {m.gaussian_plus[1]:.2f}, weights {m.weight_minus:.2f}/{m.weight_plus:.2f}")

"""Option pricing for instruments trading in a price channel.

Two settings are covered: an unattainable-boundary tanh model with closed-form
European prices at zero rate (``channel_model``, ``channel_pricer``), and
attainable reflecting boundaries, where channel calls and puts decompose into
double-knock-out options plus one-touch rebates (``barrier_pricer``).
``oracles`` holds the independent engines used to validate both.
"""

from .barrier_pricer import (
    BarrierMarket,
    channel_call,
    channel_put,
    dko_call,
    dko_put,
    one_touch_lower,
    one_touch_upper,
)
from .channel_model import (
    ChannelParams,
    MixtureDecomposition,
    density,
    drift_mu,
    drift_nonzero_rate,
    exp_martingale,
    mixture_decomposition,
    s_of_x,
    x_of_s,
    zero_mode_martingale,
)
from .channel_pricer import (
    OptionSpec,
    call_delta,
    call_price,
    call_price_asymptotic,
    hitting_weights,
    put_delta,
    put_price,
)
from .results import PriceResult

__version__ = "0.1.0"

__all__ = [
    "BarrierMarket",
    "ChannelParams",
    "MixtureDecomposition",
    "OptionSpec",
    "PriceResult",
    "call_delta",
    "call_price",
    "call_price_asymptotic",
    "channel_call",
    "channel_put",
    "density",
    "dko_call",
    "dko_put",
    "drift_mu",
    "drift_nonzero_rate",
    "exp_martingale",
    "hitting_weights",
    "mixture_decomposition",
    "one_touch_lower",
    "one_touch_upper",
    "put_delta",
    "put_price",
    "s_of_x",
    "x_of_s",
    "zero_mode_martingale",
]

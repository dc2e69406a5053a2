"""Independent ground-truth engines used to validate the pricers."""

from .binomial import binomial_claim_price, detect_boundary_arbitrage, detect_upper_boundary_arbitrage
from .fokker_planck import fp_residual
from .montecarlo import McConfig, McEstimate, barrier_estimates, mc_barrier, mc_channel, simulate_barrier
from .pde import BoundaryValueProblem, PdeSolution, pde_solve
from .quadrature import expectation, quad_price

__all__ = [
    "BoundaryValueProblem",
    "McConfig",
    "McEstimate",
    "PdeSolution",
    "barrier_estimates",
    "binomial_claim_price",
    "detect_boundary_arbitrage",
    "detect_upper_boundary_arbitrage",
    "expectation",
    "fp_residual",
    "mc_barrier",
    "mc_channel",
    "pde_solve",
    "quad_price",
    "simulate_barrier",
]

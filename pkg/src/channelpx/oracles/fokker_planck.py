"""Finite-difference check that the closed-form density solves the forward equation."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..channel_model import ChannelParams, density, drift_mu


def fp_residual(
    p: ChannelParams,
    grid: tuple[int, int] = (400, 400),
    *,
    x0: float | None = None,
    x_range: tuple[float, float] | None = None,
    t_range: tuple[float, float] = (0.1, 2.0),
    steps: tuple[float, float] | None = None,
    density_fn: Callable | None = None,
    drift_fn: Callable | None = None,
) -> float:
    """Max |dP/dt + d(mu P)/dx - sigma^2/2 d2P/dx2| over an evaluation grid.

    Derivatives are central differences with steps ``(hx, ht)``, independent
    of the grid spacing, so the result is pure O(h^2) discretisation error.
    ``density_fn(x, x0, t)`` and ``drift_fn(x)`` default to the channel model.
    """
    nx, nt = grid
    x0 = p.x_star if x0 is None else x0
    if x_range is None:
        x_range = (p.x_star - 4.0 / p.nu, p.x_star + 4.0 / p.nu)
    t_min, t_max = t_range
    if steps is None:
        steps = (2e-3 * p.sigma * math.sqrt(t_min), 1e-3 * t_min)
    hx, ht = steps
    dens = density_fn or (lambda x, x0_, t: density(x, x0_, t, p))
    mu = drift_fn or (lambda x: drift_mu(x, p))

    xs = np.linspace(*x_range, nx)
    var_half = 0.5 * p.sigma**2
    worst = 0.0
    for t in np.linspace(t_min, t_max, nt):
        P = dens(xs, x0, t)
        dP_dt = (dens(xs, x0, t + ht) - dens(xs, x0, t - ht)) / (2.0 * ht)
        flux_up = mu(xs + hx) * dens(xs + hx, x0, t)
        flux_dn = mu(xs - hx) * dens(xs - hx, x0, t)
        d_flux = (flux_up - flux_dn) / (2.0 * hx)
        d2P = (dens(xs + hx, x0, t) - 2.0 * P + dens(xs - hx, x0, t)) / (hx * hx)
        worst = max(worst, float(np.max(np.abs(dP_dt + d_flux - var_half * d2P))))
    return worst

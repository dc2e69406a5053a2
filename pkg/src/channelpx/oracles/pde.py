"""Crank-Nicolson solver for the Black-Scholes-Merton equation on a barrier strip.

Works in x = ln S on [ln S-, ln S+] with both barriers on grid nodes and
Dirichlet data there. The first two steps are replaced by four implicit
Euler half steps (Rannacher start) and the terminal payoff is cell-averaged
so that kinks and corner discontinuities do not spoil second-order
convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import solve_banded

from ..errors import GridTooCoarse

BoundaryValue = Union[float, Callable[[float], float]]

MIN_NODES = 200


@dataclass(frozen=True)
class BoundaryValueProblem:
    """Terminal payoff plus Dirichlet data at the two barriers.

    Boundary values may be constants or functions of time to maturity.
    ``kinks`` lists prices where the payoff is not smooth.
    """

    payoff: Callable[[np.ndarray], np.ndarray]
    lower: BoundaryValue = 0.0
    upper: BoundaryValue = 0.0
    kinks: tuple[float, ...] = ()

    @classmethod
    def dko_call(cls, K: float) -> "BoundaryValueProblem":
        return cls(lambda S: np.maximum(S - K, 0.0), 0.0, 0.0, (K,))

    @classmethod
    def dko_put(cls, K: float) -> "BoundaryValueProblem":
        return cls(lambda S: np.maximum(K - S, 0.0), 0.0, 0.0, (K,))

    @classmethod
    def one_touch_upper(cls) -> "BoundaryValueProblem":
        return cls(np.zeros_like, 0.0, 1.0)

    @classmethod
    def one_touch_lower(cls) -> "BoundaryValueProblem":
        return cls(np.zeros_like, 1.0, 0.0)

    @classmethod
    def channel_call(cls, K: float, upper: float) -> "BoundaryValueProblem":
        return cls(lambda S: np.maximum(S - K, 0.0), 0.0, upper - K, (K,))

    @classmethod
    def channel_put(cls, K: float, lower: float) -> "BoundaryValueProblem":
        return cls(lambda S: np.maximum(K - S, 0.0), K - lower, 0.0, (K,))


@dataclass(frozen=True)
class PdeSolution:
    x: np.ndarray
    V: np.ndarray
    tau: float

    @property
    def S(self) -> np.ndarray:
        return np.exp(self.x)

    def at(self, spot: float) -> float:
        """Cubic Lagrange interpolation in log-price."""
        xq = math.log(spot)
        x = self.x
        if xq <= x[0]:
            return float(self.V[0])
        if xq >= x[-1]:
            return float(self.V[-1])
        h = x[1] - x[0]
        i = int((xq - x[0]) / h)
        j = min(max(i - 1, 0), len(x) - 4)
        xs = x[j : j + 4]
        vs = self.V[j : j + 4]
        out = 0.0
        for k in range(4):
            w = 1.0
            for m in range(4):
                if m != k:
                    w *= (xq - xs[m]) / (xs[k] - xs[m])
            out += w * vs[k]
        return float(out)


def _value(bv: BoundaryValue, tau: float) -> float:
    return float(bv(tau)) if callable(bv) else float(bv)


def _cell_average(payoff, x: np.ndarray, h: float, kinks_x: list[float]) -> np.ndarray:
    nodes, weights = leggauss(8)
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        a, b = xi - 0.5 * h, xi + 0.5 * h
        cuts = [a] + [k for k in kinks_x if a < k < b] + [b]
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            total += half * float(np.dot(weights, payoff(np.exp(mid + half * nodes))))
        out[i] = total / h
    return out


def pde_solve(
    problem: BoundaryValueProblem,
    mkt,
    tau: float,
    grid: tuple[int, int] = (2000, 2000),
) -> PdeSolution:
    """Solve backward from maturity to time-to-maturity ``tau``.

    ``mkt`` supplies ``sigma_gbm``, ``r``, ``b``, ``lower`` and ``upper``.
    ``grid`` is (space nodes including both barriers, time steps).
    """
    M, N = grid
    if M < MIN_NODES or N < MIN_NODES:
        raise GridTooCoarse(f"grid {grid} below the ({MIN_NODES}, {MIN_NODES}) minimum")
    x = np.linspace(math.log(mkt.lower), math.log(mkt.upper), M)
    h = x[1] - x[0]
    kinks_x = [math.log(k) for k in problem.kinks if mkt.lower < k < mkt.upper]

    V = np.empty(M)
    V[1:-1] = _cell_average(problem.payoff, x[1:-1], h, kinks_x)
    V[0] = _value(problem.lower, 0.0)
    V[-1] = _value(problem.upper, 0.0)
    if tau == 0.0:
        return PdeSolution(x, V, 0.0)

    a = 0.5 * mkt.sigma_gbm**2
    c = mkt.b - a
    lo = a / h**2 - c / (2.0 * h)
    di = -2.0 * a / h**2 - mkt.r
    up = a / h**2 + c / (2.0 * h)
    n_int = M - 2

    def apply_L(v: np.ndarray) -> np.ndarray:
        return lo * v[:-2] + di * v[1:-1] + up * v[2:]

    def step(v: np.ndarray, t_old: float, dt: float, theta: float) -> np.ndarray:
        bl, bu = _value(problem.lower, t_old + dt), _value(problem.upper, t_old + dt)
        rhs = v[1:-1] + (1.0 - theta) * dt * apply_L(v)
        rhs[0] += theta * dt * lo * bl
        rhs[-1] += theta * dt * up * bu
        ab = np.empty((3, n_int))
        ab[0, 1:] = -theta * dt * up
        ab[0, 0] = 0.0
        ab[1, :] = 1.0 - theta * dt * di
        ab[2, :-1] = -theta * dt * lo
        ab[2, -1] = 0.0
        out = np.empty_like(v)
        out[1:-1] = solve_banded((1, 1), ab, rhs)
        out[0], out[-1] = bl, bu
        return out

    dt = tau / N
    t = 0.0
    n_rannacher = min(2, N)
    for _ in range(2 * n_rannacher):
        V = step(V, t, 0.5 * dt, 1.0)
        t += 0.5 * dt
    for _ in range(N - n_rannacher):
        V = step(V, t, dt, 0.5)
        t += dt
    return PdeSolution(x, V, tau)

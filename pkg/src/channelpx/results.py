"""Result containers shared by the pricers and oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

METHODS = ("closed_form", "quadrature", "monte_carlo", "series")


@dataclass(frozen=True)
class PriceResult:
    price: float
    method: str
    diag: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def __float__(self) -> float:
        return float(self.price)

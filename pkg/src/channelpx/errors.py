"""Exception hierarchy.

Every error raised on purpose by the library derives from ``ChannelpxError``
so callers (and the CLI) can separate domain failures from bugs.
"""

from __future__ import annotations


class ChannelpxError(ValueError):
    """Base class for domain errors."""

    code = "domain_error"


class PriceOutsideChannel(ChannelpxError):
    code = "price_outside_channel"


class StrikeOutsideChannel(ChannelpxError):
    code = "strike_outside_channel"


class NonpositiveTime(ChannelpxError):
    code = "nonpositive_time"


class NegativeTime(ChannelpxError):
    code = "negative_time"


class NonpositiveRho(ChannelpxError):
    code = "nonpositive_rho"


class InvalidParameters(ChannelpxError):
    code = "invalid_parameters"


class InvalidStrike(ChannelpxError):
    code = "invalid_strike"


class QuadratureFailure(ChannelpxError):
    code = "quadrature_failure"


class SeriesNotConverged(ChannelpxError):
    code = "series_not_converged"


class GridTooCoarse(ChannelpxError):
    code = "grid_too_coarse"


class DegenerateBranch(ChannelpxError):
    code = "degenerate_branch"

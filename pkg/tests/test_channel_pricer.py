from __future__ import annotations

import math

import numpy as np
import pytest
from conftest import mp_call_price, random_channel_cases
from hypothesis import given, settings
from hypothesis import strategies as st

from channelpx import (
    ChannelParams,
    OptionSpec,
    call_delta,
    call_price,
    call_price_asymptotic,
    hitting_weights,
    put_delta,
    put_price,
)
from channelpx.channel_pricer import price
from channelpx.errors import InvalidParameters, NegativeTime, PriceOutsideChannel
from channelpx.oracles import quad_price

# default parameter set priced to 30 digits with mpmath, then frozen
DEFAULT_CALL = 0.0030978714697249640


@st.composite
def cases(draw):
    A = draw(st.floats(50, 150))
    B = A * draw(st.floats(0.05, 0.4))
    p = ChannelParams(A, B, draw(st.floats(0.2, 5)), draw(st.floats(0.05, 0.6)))
    S = A - B + 2 * B * draw(st.floats(0.02, 0.98))
    K = A - B + 2 * B * draw(st.floats(0.02, 0.98))
    return p, S, K, draw(st.floats(0.05, 10))


class TestReferenceValues:
    def test_default_against_frozen(self, default_params):
        v = call_price(100.0, OptionSpec(110.0, 1.0), default_params)
        assert v.method == "closed_form"
        assert v.price == pytest.approx(DEFAULT_CALL, rel=1e-13)

    def test_frozen_value_reproduces(self, default_params):
        assert mp_call_price(100.0, 110.0, 1.0, default_params) == pytest.approx(DEFAULT_CALL, rel=1e-15)

    @pytest.mark.parametrize("case", random_channel_cases(3, seed=11))
    def test_random_against_mpmath(self, case):
        p, S, K, tau = case
        ref = mp_call_price(S, K, tau, p)
        assert call_price(S, OptionSpec(K, tau), p).price == pytest.approx(ref, rel=1e-10)

    def test_asymptote(self):
        p = ChannelParams(100.0, 20.0, 1.0, 0.2)
        assert call_price_asymptotic(100.0, 110.0, p) == pytest.approx(5.0)
        assert hitting_weights(100.0, p) == (0.5, 0.5)
        assert hitting_weights(110.0, p) == pytest.approx((0.75, 0.25))
        assert call_price_asymptotic(80.0 + 1e-12, 110.0, p) == pytest.approx(0.0, abs=1e-12)


class TestLimits:
    def test_strike_near_edges(self, default_params):
        p = default_params
        assert call_price(100.0, OptionSpec(120.0 - 1e-9, 1.0), p).price < 1e-9
        assert call_price(100.0, OptionSpec(80.0 + 1e-9, 1.0), p).price == pytest.approx(20.0, abs=1e-8)
        assert put_price(100.0, OptionSpec(80.0 + 1e-9, 1.0, "put"), p).price < 1e-9
        assert put_price(100.0, OptionSpec(120.0 - 1e-9, 1.0, "put"), p).price == pytest.approx(20.0, abs=1e-8)

    def test_short_maturity(self, default_params):
        v = call_price(105.0, OptionSpec(100.0, 1e-10), default_params).price
        assert v == pytest.approx(5.0, abs=1e-9)

    def test_zero_maturity_is_intrinsic(self, default_params):
        r = call_price(105.0, OptionSpec(100.0, 0.0), default_params)
        assert r.price == 5.0 and r.diag["intrinsic"]
        assert put_price(105.0, OptionSpec(100.0, 0.0, "put"), default_params).price == 0.0

    @pytest.mark.parametrize(
        "K, call, put, flag",
        [
            (120.0, 0.0, 20.0, "strike_at_boundary"),
            (130.0, 0.0, 30.0, "strike_outside_channel"),
            (80.0, 20.0, 0.0, "strike_at_boundary"),
            (70.0, 30.0, 0.0, "strike_outside_channel"),
        ],
    )
    def test_strike_outside_channel(self, default_params, K, call, put, flag):
        c = call_price(100.0, OptionSpec(K, 1.0), default_params)
        pt = put_price(100.0, OptionSpec(K, 1.0, "put"), default_params)
        assert (c.price, pt.price) == (call, put)
        assert c.diag[flag] and pt.diag[flag]

    def test_saturation(self, default_params):
        p = default_params
        limit = call_price_asymptotic(100.0, 110.0, p)
        taus = np.geomspace(1.0, 400.0 / (p.sigma * p.nu) ** 2, 40)
        gaps = [abs(call_price(100.0, OptionSpec(110.0, t), p).price - limit) for t in taus]
        assert gaps[-1] < 1e-4
        # the gap reaches exact zero in double precision, hence non-strict
        assert all(a >= b for a, b in zip(gaps, gaps[1:]))
        assert gaps[0] > gaps[10] > gaps[20] > 0.0


class TestErrors:
    @pytest.mark.parametrize("S", [80.0, 120.0, 60.0])
    def test_spot_outside(self, default_params, S):
        with pytest.raises(PriceOutsideChannel):
            call_price(S, OptionSpec(100.0, 1.0), default_params)

    def test_negative_time(self):
        with pytest.raises(NegativeTime):
            OptionSpec(100.0, -0.1)

    def test_bad_kind(self):
        with pytest.raises(InvalidParameters):
            OptionSpec(100.0, 1.0, "straddle")

    def test_bad_form(self, default_params):
        with pytest.raises(ValueError):
            call_price(100.0, OptionSpec(110.0, 1.0), default_params, form="other")


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(cases())
    def test_forms_agree(self, case):
        p, S, K, tau = case
        spec = OptionSpec(K, tau)
        a = call_price(S, spec, p).price
        b = call_price(S, spec, p, form="cosh").price
        assert b == pytest.approx(a, rel=1e-12, abs=1e-300)

    @settings(max_examples=200, deadline=None)
    @given(cases())
    def test_parity(self, case):
        p, S, K, tau = case
        c = call_price(S, OptionSpec(K, tau), p).price
        v = put_price(S, OptionSpec(K, tau, "put"), p).price
        assert c - v == pytest.approx(S - K, abs=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(cases())
    def test_bounds(self, case):
        p, S, K, tau = case
        c = call_price(S, OptionSpec(K, tau), p).price
        upper = (S - p.S_minus) * (p.S_plus - K) / (p.S_plus - p.S_minus)
        assert max(S - K, 0.0) - 1e-12 <= c <= upper + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(cases(), st.floats(1e-3, 0.05))
    def test_monotone(self, case, frac):
        p, S, K, tau = case
        dK = frac * (p.S_plus - K)
        dS = frac * (p.S_plus - S)
        c = call_price(S, OptionSpec(K, tau), p).price
        assert call_price(S, OptionSpec(K + dK, tau), p).price <= c + 1e-12
        assert call_price(S + dS, OptionSpec(K, tau), p).price >= c - 1e-12
        assert put_price(S, OptionSpec(K + dK, tau, "put"), p).price >= put_price(
            S, OptionSpec(K, tau, "put"), p
        ).price - 1e-12

    @given(cases(), st.floats(-3, 3))
    def test_center_translation(self, case, shift):
        p, S, K, tau = case
        q = ChannelParams(p.A, p.B, p.nu, p.sigma, x_star=shift)
        assert call_price(S, OptionSpec(K, tau), q).price == pytest.approx(
            call_price(S, OptionSpec(K, tau), p).price, rel=1e-9, abs=1e-300
        )

    def test_decreasing_in_strike_on_grid(self, default_params):
        ks = np.linspace(80.5, 119.5, 79)
        vals = [call_price(100.0, OptionSpec(k, 1.0), default_params).price for k in ks]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("kind", ["call", "put"])
    def test_dispatch(self, default_params, kind):
        spec = OptionSpec(105.0, 0.7, kind)
        fn = call_price if kind == "call" else put_price
        assert price(101.0, spec, default_params) == fn(101.0, spec, default_params)


class TestQuadratureAgreement:
    @pytest.mark.parametrize("case", random_channel_cases(25, seed=3))
    def test_call_and_put(self, case):
        p, S, K, tau = case
        for kind in ("call", "put"):
            spec = OptionSpec(K, tau, kind)
            closed = price(S, spec, p).price
            quad = quad_price(S, spec, p).price
            assert quad == pytest.approx(closed, rel=1e-8, abs=1e-300)


class TestDelta:
    @pytest.mark.parametrize("case", random_channel_cases(20, seed=5))
    def test_against_finite_differences(self, case):
        p, S, K, tau = case
        h = 1e-5 * min(S - p.S_minus, p.S_plus - S)
        spec = OptionSpec(K, tau)
        fd = (call_price(S + h, spec, p).price - call_price(S - h, spec, p).price) / (2 * h)
        assert call_delta(S, spec, p) == pytest.approx(fd, abs=1e-7)
        assert put_delta(S, spec, p) == pytest.approx(fd - 1.0, abs=1e-7)

    def test_range_and_edges(self, default_params):
        p = default_params
        for S in np.linspace(81, 119, 20):
            d = call_delta(S, OptionSpec(100.0, 2.0), p)
            assert 0.0 <= d <= 1.0
        assert call_delta(100.0, OptionSpec(125.0, 1.0), p) == 0.0
        assert call_delta(100.0, OptionSpec(75.0, 1.0), p) == 1.0
        assert math.isclose(call_delta(100.0, OptionSpec(95.0, 0.0), p), 1.0)

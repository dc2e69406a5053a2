from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erf

from channelpx import ChannelParams
from channelpx import channel_model as cm
from channelpx.errors import InvalidParameters, NonpositiveRho, NonpositiveTime, PriceOutsideChannel
from channelpx.oracles.quadrature import expectation

params_st = st.builds(
    ChannelParams,
    A=st.floats(50, 150),
    B=st.floats(0.05, 0.4).map(lambda f: f * 100),
    nu=st.floats(0.2, 5),
    sigma=st.floats(0.05, 0.6),
    x_star=st.floats(-1, 1),
)


class TestParams:
    def test_edges(self, default_params):
        assert default_params.S_minus == 80.0
        assert default_params.S_plus == 120.0
        assert default_params.mu_star == pytest.approx(0.04)

    @pytest.mark.parametrize(
        "kw",
        [
            dict(A=10.0, B=20.0, nu=1.0, sigma=0.2),
            dict(A=100.0, B=0.0, nu=1.0, sigma=0.2),
            dict(A=100.0, B=20.0, nu=0.0, sigma=0.2),
            dict(A=100.0, B=20.0, nu=1.0, sigma=-0.1),
            dict(A=100.0, B=20.0, nu=1.0, sigma=math.nan),
        ],
    )
    def test_rejects_invalid(self, kw):
        with pytest.raises(InvalidParameters):
            ChannelParams(**kw)


class TestMaps:
    def test_drift_values(self, default_params):
        p = default_params
        assert cm.drift_mu(0.0, p) == 0.0
        assert cm.drift_mu(50.0, p) == pytest.approx(p.mu_star, rel=1e-15)
        # reference from mpmath at 30 digits
        assert cm.drift_mu(0.5, p) == pytest.approx(0.018484686290400390, rel=1e-14)

    def test_price_map(self, default_params):
        p = default_params
        assert cm.s_of_x(0.0, p) == 100.0
        assert cm.s_of_x(0.5, p) == pytest.approx(109.24234314520020, rel=1e-15)
        assert cm.s_of_x(40.0, p) == pytest.approx(120.0)
        assert cm.s_of_x(-40.0, p) == pytest.approx(80.0)
        assert cm.x_of_s(109.2423, p) == pytest.approx(0.49999725696040, rel=1e-12)
        assert cm.x_of_s(100.0, p) == 0.0

    @pytest.mark.parametrize("S", [80.0, 120.0, 79.0, 150.0, math.nan])
    def test_outside_channel(self, default_params, S):
        with pytest.raises(PriceOutsideChannel):
            cm.x_of_s(S, default_params)

    def test_vectorised(self, default_params):
        xs = np.linspace(-2, 2, 7)
        assert np.allclose(cm.x_of_s(cm.s_of_x(xs, default_params), default_params), xs)

    @given(params_st, st.floats(-3, 3), st.floats(1e-3, 1))
    def test_monotone_and_inverse(self, p, u, h):
        x = p.x_star + u / p.nu
        assert cm.s_of_x(x + h / p.nu, p) > cm.s_of_x(x, p)
        assert cm.x_of_s(cm.s_of_x(x, p), p) == pytest.approx(x, abs=1e-9)


class TestDensity:
    def test_value_at_origin(self, default_params):
        ref = float(mp.exp(-0.02) / (mp.sqrt(2 * mp.pi) * mp.mpf("0.2")))
        assert ref == pytest.approx(1.9552134698772794, rel=1e-15)
        assert cm.density(0.0, 0.0, 1.0, default_params) == pytest.approx(ref, rel=1e-14)

    def test_far_tail_no_overflow(self):
        p = ChannelParams(100.0, 20.0, 5.0, 0.6)
        val = cm.density(400.0, 398.0, 10.0, p)
        assert math.isfinite(val) and val > 0

    def test_requires_positive_time(self, default_params):
        with pytest.raises(NonpositiveTime):
            cm.density(0.0, 0.0, 0.0, default_params)

    @pytest.mark.parametrize("x0", [-1.5, -0.2, 0.0, 0.7, 1.5])
    @pytest.mark.parametrize("tau", [0.1, 1.0, 5.0, 20.0])
    def test_normalisation_and_martingale(self, default_params, x0, tau):
        p = default_params
        assert expectation(lambda x: 1.0, x0, tau, p) == pytest.approx(1.0, abs=1e-8)
        mean = expectation(lambda x: cm.s_of_x(x, p), x0, tau, p)
        assert mean == pytest.approx(cm.s_of_x(x0, p), rel=1e-8)

    @settings(max_examples=60, deadline=None)
    @given(params_st, st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 10))
    def test_mixture_identity(self, p, u, u0, tau):
        x, x0 = p.x_star + u / p.nu, p.x_star + u0 / p.nu
        d = cm.density(x, x0, tau, p)
        m = cm.mixture_density(x, x0, tau, p)
        if d > 1e-250:
            assert m == pytest.approx(d, rel=1e-12)

    @given(params_st, st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 10))
    def test_reflection_symmetry(self, p, u, u0, tau):
        a = cm.density(p.x_star + u, p.x_star + u0, tau, p)
        b = cm.density(p.x_star - u, p.x_star - u0, tau, p)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


class TestMixture:
    def test_center(self, default_params):
        m = cm.mixture_decomposition(0.0, 1.0, default_params)
        assert m.weight_plus == m.weight_minus == 0.5
        assert m.gaussian_plus == (pytest.approx(0.04), pytest.approx(0.04))

    def test_weights(self, default_params):
        x0 = cm.x_of_s(110.0, default_params)
        m = cm.mixture_decomposition(x0, 2.0, default_params)
        assert m.weight_plus == pytest.approx(0.75, rel=1e-14)
        assert m.weight_minus == pytest.approx(0.25, rel=1e-13)

    @given(params_st, st.floats(-30, 30), st.floats(0.01, 10))
    def test_weights_sum(self, p, u, tau):
        m = cm.mixture_decomposition(p.x_star + u / p.nu, tau, p)
        assert m.weight_plus + m.weight_minus == 1.0
        assert 0.0 <= m.weight_plus <= 1.0


class TestZeroMode:
    def test_brownian(self, default_params):
        w = cm.zero_mode_martingale(lambda y: 0.0, 2.5, 0.3, default_params)
        assert w == pytest.approx(2.2, rel=1e-12)

    def test_tanh_drift_is_affine_in_price(self):
        p = ChannelParams(100.0, 20.0, 1.3, 0.4, x_star=0.2)
        xs = np.linspace(-3, 3, 25)
        w = np.array([cm.zero_mode_martingale(lambda y: cm.drift_mu(y, p), x, 0.0, p) for x in xs])
        t = np.tanh(p.nu * (xs - p.x_star))
        design = np.column_stack([t, np.ones_like(t)])
        coef, *_ = np.linalg.lstsq(design, w, rcond=None)
        assert np.max(np.abs(design @ coef - w)) < 1e-8

    def test_linear_repelling_drift(self):
        # mu(x) = -k x with k < 0 has an erf zero mode
        k, p = -0.8, ChannelParams(100.0, 20.0, 1.0, 0.5)
        scale = math.sqrt(-k) / p.sigma
        x_ref = -0.4

        def closed(x):
            return (erf(scale * x) - erf(scale * x_ref)) / (erf(scale * (x_ref + 1)) - erf(scale * x_ref))

        for x in (-2.0, -0.4, 0.1, 1.7, 4.0):
            w = cm.zero_mode_martingale(lambda y: -k * y, x, x_ref, p)
            assert w == pytest.approx(closed(x), rel=1e-9, abs=1e-12)
        far = cm.zero_mode_martingale(lambda y: -k * y, 40.0, x_ref, p)
        assert far == pytest.approx(closed(math.inf), rel=1e-9)


class TestExpMartingale:
    def test_value(self, default_params):
        assert cm.exp_martingale(1.0, 1, 0.0, 1.0, default_params) == pytest.approx(
            0.98019867330675530, rel=1e-15
        )

    def test_small_rho_limit(self, default_params):
        x = np.linspace(-3, 3, 7)
        w = cm.exp_martingale(1e-12, 1, x, 0.0, default_params)
        assert np.allclose(w, np.exp(x) / np.cosh(x), rtol=1e-10)

    @pytest.mark.parametrize("rho", [0.0, -1.0])
    def test_rejects_nonpositive_rho(self, default_params, rho):
        with pytest.raises(NonpositiveRho):
            cm.exp_martingale(rho, 1, 0.0, 0.0, default_params)

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("rho", [0.3, 2.0])
    def test_martingale_property(self, sign, rho):
        p = ChannelParams(100.0, 20.0, 1.5, 0.3, x_star=0.1)
        x0, tau = 0.4, 1.5
        lhs = expectation(lambda x: cm.exp_martingale(rho, sign, x, tau, p), x0, tau, p)
        assert lhs == pytest.approx(cm.exp_martingale(rho, sign, x0, 0.0, p), rel=1e-8)

    def test_sigma_squared_variant_is_not_a_martingale(self):
        # the alternative lam = sqrt(rho + sigma^2) breaks the martingale property
        p = ChannelParams(100.0, 20.0, 1.5, 0.3)
        rho, x0, tau = 0.5, 0.4, 1.5
        lam = math.sqrt(rho + p.sigma**2)

        def alt(x, t):
            return math.exp(lam * x) / math.cosh(p.nu * x) * math.exp(-0.5 * rho * p.sigma**2 * t)

        lhs = expectation(lambda x: alt(x, tau), x0, tau, p)
        assert abs(lhs / alt(x0, 0.0) - 1.0) > 1e-3


class TestNonzeroRateDrift:
    def test_value(self, default_params):
        assert cm.drift_nonzero_rate(0.05, 0.0, default_params) == pytest.approx(0.25, rel=1e-15)

    def test_zero_rate(self, default_params):
        xs = np.linspace(-5, 5, 11)
        assert np.array_equal(cm.drift_nonzero_rate(0.0, xs, default_params), cm.drift_mu(xs, default_params))

    @given(params_st, st.floats(-0.1, 0.1), st.floats(-3, 3))
    def test_static_boundary_residual(self, p, r, u):
        x = p.x_star + u / p.nu
        z = p.nu * (x - p.x_star)
        sech2 = 1.0 / math.cosh(z) ** 2
        phi = p.A + p.B * math.tanh(z)
        d1 = p.B * p.nu * sech2
        d2 = -2.0 * p.B * p.nu**2 * sech2 * math.tanh(z)
        mu = cm.drift_nonzero_rate(r, x, p)
        resid = -r * phi + mu * d1 + 0.5 * p.sigma**2 * d2
        assert abs(resid) < 1e-9 * max(1.0, abs(r * phi))

    def test_grows_faster_than_linear(self, default_params):
        vals = [cm.drift_nonzero_rate(0.05, x, default_params) for x in (2.0, 4.0, 8.0)]
        assert vals[2] / vals[1] > 4.0 and vals[1] / vals[0] > 2.0

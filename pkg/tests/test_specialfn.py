"""Special-function and quadrature tests.

Derived expected values were frozen from independent oracles (direct
quadrature of the defining integrals, cross-checked with mpmath) before the
implementation existed.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as scipy_integrate

from hetnet_wpt.specialfn import (
    NonConvergenceError,
    QuadratureSpec,
    _upper_gamma_any,
    gauss_2f1_negz,
    integrate,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
)

mp.mp.dps = 30


class TestIncompleteGamma:
    def test_lower_exponential_closed_form(self):
        assert lower_incomplete_gamma(1.0, 1.0) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-12)

    def test_lower_empty_integral(self):
        assert lower_incomplete_gamma(2.5, 0.0) == 0.0

    def test_lower_frozen_quadrature_oracle(self):
        # quadrature of t^1.75 exp(-t) on [0, 3.2]
        assert lower_incomplete_gamma(2.75, 3.2) == pytest.approx(1.0879660051472204, rel=1e-10)

    def test_upper_exponential_closed_form(self):
        assert upper_incomplete_gamma(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_upper_complete(self):
        assert upper_incomplete_gamma(3.0, 0.0) == pytest.approx(2.0, rel=1e-14)

    def test_upper_frozen_complement_oracle(self):
        # Gamma(1.875) minus the quadrature value of the lower function
        assert upper_incomplete_gamma(1.875, 1.1) == pytest.approx(0.6305495802755834, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            lower_incomplete_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            lower_incomplete_gamma(-1.5, 1.0)
        with pytest.raises(ValueError):
            upper_incomplete_gamma(2.0, -0.1)

    def test_complement_identity_grid(self):
        # 200-point grid spanning both sides of the series/CF split
        for a in np.logspace(-1, 1.5, 20):
            for x in np.linspace(0.05, 40.0, 10):
                lo = lower_incomplete_gamma(a, x)
                hi = upper_incomplete_gamma(a, x)
                assert lo + hi == pytest.approx(math.gamma(a), rel=1e-12)

    def test_monotonicity(self):
        xs = np.linspace(0.0, 12.0, 50)
        for a in (0.3, 1.0, 4.7):
            lows = [lower_incomplete_gamma(a, x) for x in xs]
            ups = [upper_incomplete_gamma(a, x) for x in xs]
            assert all(b >= a_ for a_, b in zip(lows, lows[1:]))
            assert all(b <= a_ for a_, b in zip(ups, ups[1:]))

    def test_against_mpmath_grid(self):
        for a in (0.2, 0.9, 2.3, 7.5, 19.0):
            for x in (1e-4, 0.3, 1.0, 4.0, 25.0):
                want = float(mp.gammainc(a, 0, x))
                assert lower_incomplete_gamma(a, x) == pytest.approx(want, rel=1e-10)


class TestExtendedUpperGamma:
    """Internal helper used by the large-array asymptotics (a <= 0 arises there)."""

    def test_matches_public_for_positive_a(self):
        assert _upper_gamma_any(2.5, 1.3) == pytest.approx(upper_incomplete_gamma(2.5, 1.3), rel=1e-13)

    def test_negative_noninteger_against_mpmath(self):
        for a in (-0.5, -0.4, -1.75, -2.3):
            for x in (3.1e-3, 0.2, 1.5, 8.0):
                want = float(mp.gammainc(a, x, mp.inf))
                assert _upper_gamma_any(a, x) == pytest.approx(want, rel=1e-9)

    def test_nonpositive_integer_against_mpmath(self):
        for a in (0.0, -1.0, -2.0):
            for x in (3.1e-3, 0.7, 2.0):
                want = float(mp.gammainc(a, x, mp.inf))
                assert _upper_gamma_any(a, x) == pytest.approx(want, rel=1e-9)


class TestGauss2F1:
    def test_unit_at_zero(self):
        assert gauss_2f1_negz(1.0, 0.2, 1.5, 0.0) == 1.0

    def test_log_closed_form(self):
        assert gauss_2f1_negz(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-10)

    def test_arctan_closed_form(self):
        # frozen from the Euler integral oracle; equals arctan(2)/2
        assert gauss_2f1_negz(1.0, 0.5, 1.5, -4.0) == pytest.approx(0.5535743588970452, rel=1e-10)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gauss_2f1_negz(1.0, 0.5, 1.5, 0.1)
        with pytest.raises(ValueError):
            gauss_2f1_negz(1.0, 0.5, -2.0, -1.0)

    def test_call_site_pattern_frozen_euler_oracle(self):
        # 2F1[1, (alpha-2)/alpha; 2-2/alpha; -w] frozen from quadrature of the
        # Euler integral representation (verified against mpmath to 1e-9)
        frozen = {
            (2.5, 0.1): 0.9841843312360485,
            (2.5, 1.0): 0.8883135726517883,
            (2.5, 10.0): 0.6505123023570236,
            (2.5, 1e3): 0.2682605552574057,
            (2.5, 1e6): 0.06744652415500878,
            (2.8, 0.1): 0.9789469892317458,
            (2.8, 1.0): 0.8529471661081666,
            (2.8, 10.0): 0.556208903329931,
            (2.8, 1e3): 0.15912408791814356,
            (2.8, 1e6): 0.0221653769971485,
            (3.0, 0.1): 0.97633568718963,
            (3.0, 1.0): 0.835648848264721,
            (3.0, 10.0): 0.5131441558759557,
            (3.0, 1e3): 0.12042015749070535,
            (3.0, 1e6): 0.01209149576176145,
            (3.5, 0.1): 0.9716486551922456,
            (3.5, 1.0): 0.8051933560780412,
            (3.5, 10.0): 0.4423606162940021,
            (3.5, 1e3): 0.07077995504908226,
            (3.5, 1e6): 0.003704111792891627,
            (4.0, 0.1): 0.9685340823403893,
            (4.0, 1.0): 0.7853981633974485,
            (4.0, 10.0): 0.39987600505576615,
            (4.0, 1e3): 0.04867327446245658,
            (4.0, 1e6): 0.0015697963271282297,
        }
        for (alpha, w), want in frozen.items():
            b = (alpha - 2.0) / alpha
            c = 2.0 - 2.0 / alpha
            assert gauss_2f1_negz(1.0, b, c, -w) == pytest.approx(want, rel=1e-8)

    def test_bounded_on_negative_axis(self):
        for z in (-0.01, -0.4, -2.0, -50.0, -1e4):
            v = gauss_2f1_negz(1.2, 0.7, 1.9, z)
            assert 0.0 < v <= 1.0

    def test_against_mpmath_general_parameters(self):
        for (a, b, c) in ((0.3, 1.7, 2.2), (2.0, 0.25, 1.1), (1.0, 1.0, 3.7)):
            for z in (-0.3, -1.0, -6.0, -40.0, -2e3):
                want = float(mp.hyp2f1(a, b, c, z))
                assert gauss_2f1_negz(a, b, c, z) == pytest.approx(want, rel=1e-8)


class TestIntegrate:
    def test_exponential_to_infinity(self):
        assert integrate(lambda t: math.exp(-t), 0.0, math.inf) == pytest.approx(1.0, rel=1e-9)

    def test_rayleigh_normalization(self):
        lam = 1e-3
        val = integrate(lambda t: 2.0 * math.pi * lam * t * math.exp(-math.pi * lam * t * t), 0.0, math.inf)
        assert val == pytest.approx(1.0, rel=1e-9)

    def test_finite_antiderivative(self):
        val = integrate(lambda t: t * math.exp(-t * t), 0.0, 3.0)
        assert val == pytest.approx((1.0 - math.exp(-9.0)) / 2.0, rel=1e-12)

    def test_empty_interval(self):
        assert integrate(lambda t: t, 2.0, 2.0) == 0.0

    def test_against_scipy_on_kinked_integrand(self):
        f = lambda t: max(t, 1.0) ** -3.5 * t
        want, _ = scipy_integrate.quad(f, 0.0, 40.0, epsabs=1e-13, epsrel=1e-12)
        assert integrate(f, 0.0, 40.0) == pytest.approx(want, rel=1e-9)

    def test_nonconvergence_reported(self):
        spec = QuadratureSpec(rel_tol=1e-12, max_subdivisions=2)
        f = lambda t: math.sin(50.0 * t) ** 2 / (1e-3 + t)
        with pytest.raises(NonConvergenceError):
            integrate(f, 0.0, 1.0, spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(tail_cutoff_fraction=0.01)
        with pytest.raises(ValueError):
            QuadratureSpec(max_subdivisions=0)
        with pytest.raises(ValueError):
            QuadratureSpec(abs_tol=-1.0)

    @settings(max_examples=25, deadline=None)
    @given(
        c0=st.floats(-3.0, 3.0),
        c1=st.floats(-3.0, 3.0),
        c2=st.floats(-3.0, 3.0),
        d0=st.floats(-3.0, 3.0),
        d1=st.floats(-3.0, 3.0),
    )
    def test_linearity_on_polynomial_exponentials(self, c0, c1, c2, d0, d1):
        # signed coefficients can cancel the integral to zero, so give the
        # tolerance an absolute floor
        spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-10)
        f = lambda t: (c0 + c1 * t + c2 * t * t) * math.exp(-t)
        g = lambda t: (d0 + d1 * t) * math.exp(-0.5 * t)
        both = integrate(lambda t: f(t) + g(t), 0.0, math.inf, spec)
        fi = integrate(f, 0.0, math.inf, spec)
        gi = integrate(g, 0.0, math.inf, spec)
        scale = max(1.0, abs(fi), abs(gi))
        assert abs(both - (fi + gi)) <= 1e-8 * scale

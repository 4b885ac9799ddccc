"""Harvested-energy analytics: conditional means, exact averages, large-array closed forms."""

import dataclasses
import math

import pytest

from hetnet_wpt.association import macro_weight_asymptotic_raw, tier_weight
from hetnet_wpt.energy import (
    EnergyBreakdown,
    avg_energy_macro,
    avg_energy_macro_asymptotic,
    avg_energy_tier_k,
    cond_energy_macro,
    cond_energy_tier_k,
    hetnet_avg_energy,
    xi1,
    xi2,
    xi3,
)
from hetnet_wpt.model import Scheme
from hetnet_wpt.specialfn import QuadratureSpec, integrate

from conftest import build_cfg, fig2_cfg, fig3_cfg, fig7_cfg, three_tier_cfg

SCHEMES = (Scheme.DRSP, Scheme.URSP)


def first_order_pdf(x, scheme, cfg):
    """Signed large-array serving-distance density (normalized by its own mass)."""
    m = cfg.macro
    envelope = 2.0 * math.pi * m.density * x * math.exp(-math.pi * m.density * x * x)
    corr = 1.0
    for t, r in zip(cfg.tiers, cfg.macro_vs_tier(scheme)):
        corr -= math.pi * t.density * r * r * x ** (2.0 * m.alpha / t.alpha)
    return envelope * corr / macro_weight_asymptotic_raw(scheme, cfg)


# ---------------------------------------------------------------------------
# EnergyBreakdown container
# ---------------------------------------------------------------------------


class TestBreakdown:
    def test_total_is_component_sum(self):
        b = EnergyBreakdown(1.0, 0.25, 0.125, 0.0625)
        assert b.total == 1.0 + 0.25 + 0.125 + 0.0625

    def test_scaled_multiplies_every_component(self):
        b = EnergyBreakdown(1.0, 2.0, 3.0, 4.0).scaled(0.5)
        assert dataclasses.astuple(b) == (0.5, 1.0, 1.5, 2.0)


# ---------------------------------------------------------------------------
# conditional energies
# ---------------------------------------------------------------------------


class TestConditionalMacro:
    def test_single_user_has_no_isotropic_share(self):
        cfg = build_cfg(n_users=1)
        for s in SCHEMES:
            assert cond_energy_macro(s, 7.0, cfg).isotropic == 0.0

    def test_single_tier_ambient_macro_closed_form_beyond_clamp(self):
        cfg = build_cfg(tiers=())
        sys, m = cfg.sys, cfg.macro
        for x in (1.5, 10.0, 120.0):
            want = (
                sys.eta
                * sys.tau
                * sys.block_time
                * m.power
                * sys.beta
                * 2.0
                * math.pi
                * m.density
                * x ** (2.0 - m.alpha)
                / (m.alpha - 2.0)
            )
            got = cond_energy_macro(Scheme.DRSP, x, cfg).ambient_macro
            assert got == pytest.approx(want, rel=1e-14)

    def test_no_small_tiers_means_no_small_ambient(self):
        cfg = build_cfg(tiers=())
        assert cond_energy_macro(Scheme.URSP, 3.0, cfg).ambient_small == 0.0

    def test_serving_terms_clamped_below_reference_distance(self):
        cfg = fig2_cfg()
        for s in SCHEMES:
            near = cond_energy_macro(s, 0.25, cfg)
            at_clamp = cond_energy_macro(s, cfg.sys.ref_dist, cfg)
            assert near.directed == pytest.approx(at_clamp.directed, rel=1e-15)
            assert near.isotropic == pytest.approx(at_clamp.isotropic, rel=1e-15)

    def test_components_continuous_across_kernel_boundaries(self):
        cfg = fig3_cfg()
        d = cfg.sys.ref_dist
        eps = 1e-9
        for s in SCHEMES:
            left = cond_energy_macro(s, d - eps, cfg)
            right = cond_energy_macro(s, d + eps, cfg)
            assert left.ambient_macro == pytest.approx(right.ambient_macro, rel=1e-6)
            # small-tier exclusion reaches the clamp at its own distance
            t = cfg.tiers[0]
            r = cfg.macro_vs_tier(s)[0]
            x_b = (d / r) ** (t.alpha / cfg.macro.alpha)
            left = cond_energy_macro(s, x_b - eps, cfg)
            right = cond_energy_macro(s, x_b + eps, cfg)
            assert left.ambient_small == pytest.approx(right.ambient_small, rel=1e-6)

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            cond_energy_macro(Scheme.DRSP, -1.0, fig2_cfg())

    def test_all_components_nonnegative(self):
        cfg = fig7_cfg()
        for s in SCHEMES:
            for x in (0.0, 0.5, 1.0, 5.0, 50.0, 500.0):
                b = cond_energy_macro(s, x, cfg)
                assert min(dataclasses.astuple(b)) >= 0.0


class TestConditionalTier:
    def test_no_directed_share_from_single_antenna_stations(self):
        cfg = fig3_cfg()
        for s in SCHEMES:
            assert cond_energy_tier_k(s, 1, 4.0, cfg).directed == 0.0

    def test_serving_term_clamped_below_reference_distance(self):
        cfg = fig3_cfg()
        sys = cfg.sys
        t = cfg.tiers[0]
        want = sys.eta * t.power * sys.beta * sys.ref_dist ** (-t.alpha) * sys.tau * sys.block_time
        for y in (0.0, 0.3, 1.0):
            assert cond_energy_tier_k(Scheme.DRSP, 1, y, cfg).isotropic == pytest.approx(
                want, rel=1e-14
            )

    def test_vanishing_macro_density_kills_macro_ambient(self):
        cfg = build_cfg(lam_m=1e-300, n_antennas=50, n_users=5)
        b = cond_energy_tier_k(Scheme.DRSP, 1, 5.0, cfg)
        assert b.ambient_macro == pytest.approx(0.0, abs=1e-280)

    def test_interfering_tier_power_scales_small_ambient(self):
        lo = build_cfg(tiers=((5e-3, 30.0, 4.0),))
        hi = build_cfg(tiers=((5e-3, 33.010299956639813, 4.0),))  # exactly 2x the watts
        for s in SCHEMES:
            # same exclusion geometry under URSP (power-free); DRSP radii shift instead
            if s is Scheme.URSP:
                b_lo = cond_energy_tier_k(s, 1, 6.0, lo)
                b_hi = cond_energy_tier_k(s, 1, 6.0, hi)
                assert b_hi.ambient_small == pytest.approx(2.0 * b_lo.ambient_small, rel=1e-10)

    def test_tier_index_validated(self):
        with pytest.raises(ValueError):
            cond_energy_tier_k(Scheme.DRSP, 2, 1.0, fig2_cfg())


# ---------------------------------------------------------------------------
# exact averages
# ---------------------------------------------------------------------------


class TestAverages:
    def test_macro_only_directed_matches_independent_closed_form(self):
        # Rayleigh nearest-distance average of the clamped power law, written
        # with an upper incomplete gamma instead of the package quadrature.
        mp = pytest.importorskip("mpmath")
        cfg = build_cfg(tiers=())
        sys, m = cfg.sys, cfg.macro
        u_d = math.pi * m.density * sys.ref_dist**2
        mean_serve = sys.beta * (
            sys.ref_dist ** (-m.alpha) * (1.0 - math.exp(-u_d))
            + (math.pi * m.density) ** (m.alpha / 2.0)
            * float(mp.gammainc(1.0 - m.alpha / 2.0, u_d))
        )
        want = (
            sys.eta
            * m.n_antennas
            * (m.power / m.n_users)
            * mean_serve
            * sys.tau
            * sys.block_time
        )
        got = avg_energy_macro(Scheme.DRSP, cfg).directed
        assert got == pytest.approx(want, rel=1e-9)
        assert got == pytest.approx(0.0014627969813905465, rel=1e-12)

    def test_linear_in_eta(self):
        base = build_cfg(eta=0.35)
        doubled = build_cfg(eta=0.70)
        for s in SCHEMES:
            b1 = avg_energy_macro(s, base)
            b2 = avg_energy_macro(s, doubled)
            for f in ("directed", "isotropic", "ambient_macro", "ambient_small"):
                assert getattr(b2, f) == pytest.approx(2.0 * getattr(b1, f), rel=1e-9)

    def test_linear_in_harvest_window(self):
        t1 = avg_energy_tier_k(Scheme.URSP, 1, build_cfg(tau=0.3))
        t2 = avg_energy_tier_k(Scheme.URSP, 1, build_cfg(tau=0.6))
        for f in ("isotropic", "ambient_macro", "ambient_small"):
            assert getattr(t2, f) == pytest.approx(2.0 * getattr(t1, f), rel=1e-9)

    def test_macro_energy_increases_with_antennas(self):
        totals = [
            avg_energy_macro(Scheme.DRSP, fig3_cfg(n_antennas=n, n_users=20)).total
            for n in (64, 128, 256)
        ]
        assert totals[0] < totals[1] < totals[2]

    def test_macro_energy_decreases_with_scheduled_users(self):
        totals = [
            avg_energy_macro(Scheme.DRSP, fig3_cfg(n_antennas=128, n_users=s_u)).total
            for s_u in (5, 10, 20)
        ]
        assert totals[0] > totals[1] > totals[2]

    def test_directed_component_dominates_at_large_arrays(self):
        for n in (64, 128, 256):
            b = avg_energy_macro(Scheme.DRSP, fig3_cfg(n_antennas=n, n_users=20))
            assert b.directed >= b.isotropic
            assert b.directed >= b.ambient_macro
            assert b.directed >= b.ambient_small

    def test_tier_average_positive_components(self):
        b = avg_energy_tier_k(Scheme.DRSP, 1, fig3_cfg())
        assert b.directed == 0.0
        assert b.isotropic > 0.0
        assert b.ambient_macro > 0.0
        assert b.ambient_small > 0.0


# ---------------------------------------------------------------------------
# large-array closed forms
# ---------------------------------------------------------------------------


class TestXi:
    def test_cdf_limits(self):
        cfg = fig3_cfg(n_antennas=256, n_users=20)
        for s in SCHEMES:
            assert xi1(0.0, s, cfg) == 0.0
            assert xi1(math.inf, s, cfg) == pytest.approx(1.0, rel=1e-12)
            assert xi2(0.0, 0.0, s, cfg) == pytest.approx(1.0, rel=1e-12)

    def test_moment_split_identity(self):
        # lower moment on [0,c] plus upper moment on [c,inf) is the full moment
        cfg = fig3_cfg(n_antennas=256, n_users=20)
        for s in SCHEMES:
            for c, e in ((1.0, 2.0), (5.0, -1.5), (20.0, 1.5)):
                full = xi2(0.0, e, s, cfg)
                assert xi3(c, e, s, cfg) + xi2(c, e, s, cfg) == pytest.approx(full, rel=1e-10)

    def test_upper_moment_matches_quadrature_of_first_order_density(self):
        cfg = fig3_cfg(n_antennas=256, n_users=20)
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0, max_subdivisions=800)
        want = integrate(
            lambda x: x * x * first_order_pdf(x, Scheme.DRSP, cfg), 1.0, math.inf, spec
        )
        got = xi2(1.0, 2.0, Scheme.DRSP, cfg)
        assert got == pytest.approx(want, rel=1e-9)
        assert got == pytest.approx(238.32295533447646, rel=1e-12)

    def test_lower_moment_matches_quadrature_of_first_order_density(self):
        cfg = fig3_cfg(n_antennas=256, n_users=20)
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0, max_subdivisions=800)
        for s in SCHEMES:
            want = integrate(lambda x: x**1.5 * first_order_pdf(x, s, cfg), 0.0, 5.0, spec)
            assert xi3(5.0, 1.5, s, cfg) == pytest.approx(want, rel=1e-9)

    def test_out_of_regime_configuration_rejected(self):
        cfg = build_cfg(n_antennas=6, n_users=5, tiers=((50e-3, 46.0, 4.0),))
        with pytest.raises(ValueError):
            xi1(1.0, Scheme.URSP, cfg)


class TestAsymptoticAverage:
    def test_closed_form_equals_defining_integral(self):
        # the assembled incomplete-gamma expression must reproduce the integral
        # of the conditional energy against the signed first-order density
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0, max_subdivisions=2000)
        for cfg in (fig3_cfg(n_antennas=256, n_users=20), fig2_cfg(n_antennas=256)):
            for s in SCHEMES:
                want = integrate(
                    lambda x: cond_energy_macro(s, x, cfg).total * first_order_pdf(x, s, cfg),
                    0.0,
                    math.inf,
                    spec,
                )
                got = avg_energy_macro_asymptotic(s, cfg)
                assert got == pytest.approx(want, rel=1e-9)

    def test_single_tier_reduction(self):
        cfg = build_cfg(tiers=(), n_antennas=256, n_users=5)
        spec = QuadratureSpec(rel_tol=1e-11, abs_tol=0.0, max_subdivisions=800)
        want = integrate(
            lambda x: cond_energy_macro(Scheme.DRSP, x, cfg).total
            * 2.0
            * math.pi
            * cfg.macro.density
            * x
            * math.exp(-math.pi * cfg.macro.density * x * x),
            0.0,
            math.inf,
            spec,
        )
        got = avg_energy_macro_asymptotic(Scheme.DRSP, cfg)
        assert got == pytest.approx(want, rel=1e-9)
        # with no competing tiers the expansion is exact, not approximate
        assert got == pytest.approx(avg_energy_macro(Scheme.DRSP, cfg).total, rel=1e-8)

    def test_within_two_percent_at_moderate_small_cell_density(self):
        cfg = fig2_cfg(n_antennas=256)
        for s in SCHEMES:
            exact = avg_energy_macro(s, cfg).total
            asym = avg_energy_macro_asymptotic(s, cfg)
            assert abs(asym - exact) / exact <= 0.02

    def test_gap_shrinks_with_array_size_at_dense_small_cells(self):
        # at twenty-fold small-cell density the first-order truncation error is
        # material at N=256 and must decay as the array grows
        gaps = {s: [] for s in SCHEMES}
        for n in (256, 1024, 4096):
            cfg = fig3_cfg(n_antennas=n, n_users=20)
            for s in SCHEMES:
                exact = avg_energy_macro(s, cfg).total
                gaps[s].append(abs(avg_energy_macro_asymptotic(s, cfg) - exact) / exact)
        for s in SCHEMES:
            g = gaps[s]
            assert g[0] > g[1] > g[2]
            assert g[2] < 0.005
        # frozen magnitudes of the truncation error at N=256
        assert gaps[Scheme.DRSP][0] == pytest.approx(0.048015, abs=5e-4)
        assert gaps[Scheme.URSP][0] == pytest.approx(0.139231, abs=5e-4)


# ---------------------------------------------------------------------------
# network-wide mixture
# ---------------------------------------------------------------------------


class TestHetnetAverage:
    def test_single_tier_equals_macro_average(self):
        cfg = build_cfg(tiers=())
        for s in SCHEMES:
            assert hetnet_avg_energy(s, cfg) == pytest.approx(
                avg_energy_macro(s, cfg).total, rel=1e-9
            )

    def test_mixture_assembly(self):
        cfg = three_tier_cfg()
        for s in SCHEMES:
            want = tier_weight(s, 0, cfg) * avg_energy_macro(s, cfg).total
            for k in (1, 2):
                want += tier_weight(s, k, cfg) * avg_energy_tier_k(s, k, cfg).total
            assert hetnet_avg_energy(s, cfg) == pytest.approx(want, rel=1e-12)

    def test_between_per_tier_extremes(self):
        cfg = fig3_cfg()
        for s in SCHEMES:
            per_tier = [
                avg_energy_macro(s, cfg).total,
                avg_energy_tier_k(s, 1, cfg).total,
            ]
            v = hetnet_avg_energy(s, cfg)
            assert min(per_tier) <= v * (1 + 1e-12)
            assert v <= max(per_tier) * (1 + 1e-12)

    @pytest.mark.parametrize(
        "cfg_factory,n",
        [(fig2_cfg, 128), (fig3_cfg, 128), (fig7_cfg, 128), (fig3_cfg, 256)],
    )
    def test_power_oriented_association_harvests_at_least_as_much(self, cfg_factory, n):
        cfg = cfg_factory(n_antennas=n)
        assert hetnet_avg_energy(Scheme.DRSP, cfg) >= hetnet_avg_energy(Scheme.URSP, cfg)

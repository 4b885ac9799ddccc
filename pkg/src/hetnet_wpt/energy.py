"""Downlink harvested-energy analytics.

A macro-served user collects a directed beam share, an isotropic share from
the remaining beams of its serving station, and ambient radiation from every
other station; a small-cell user collects its serving signal plus ambient.
Conditional means follow from Campbell's theorem over the tiers' point
processes with the biased exclusion radii of the association rule; averages
integrate those against the serving-distance densities. Large-array closed
forms replace the integrals with incomplete gamma functions.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .association import macro_weight_asymptotic_raw, serving_distance_pdf, tier_weight
from .model import NetworkConfig, Scheme, path_loss
from .specialfn import (
    QuadratureSpec,
    _upper_gamma_any,
    integrate,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
)

__all__ = [
    "EnergyBreakdown",
    "cond_energy_macro",
    "cond_energy_tier_k",
    "avg_energy_macro",
    "avg_energy_tier_k",
    "avg_energy_macro_asymptotic",
    "xi1",
    "xi2",
    "xi3",
    "hetnet_avg_energy",
]

_AVG_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=0.0, max_subdivisions=400)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Harvested joules per block, split by source."""

    directed: float
    isotropic: float
    ambient_macro: float
    ambient_small: float

    @property
    def total(self) -> float:
        return self.directed + self.isotropic + self.ambient_macro + self.ambient_small

    def scaled(self, c: float) -> "EnergyBreakdown":
        return EnergyBreakdown(
            directed=self.directed * c,
            isotropic=self.isotropic * c,
            ambient_macro=self.ambient_macro * c,
            ambient_small=self.ambient_small * c,
        )


def _ambient_kernel(excl: float, alpha: float, d: float) -> float:
    """Mean clamped path-loss sum over one tier outside the exclusion radius.

    Campbell's theorem per unit (power * beta * 2 pi density): stations
    closer than the clamp distance d contribute at constant loss, the rest
    by the power law; continuous in the exclusion radius at excl = d.
    """
    if excl <= d:
        return d ** (-alpha) * (d * d - excl * excl) / 2.0 + d ** (2.0 - alpha) / (alpha - 2.0)
    return excl ** (2.0 - alpha) / (alpha - 2.0)


def cond_energy_macro(scheme: Scheme, x: float, cfg: NetworkConfig) -> EnergyBreakdown:
    """Mean harvested energy given macro association at serving distance x."""
    if x < 0.0:
        raise ValueError("distance must be nonnegative")
    sys = cfg.sys
    m = cfg.macro
    harvest_time = sys.tau * sys.block_time
    serve_gain = path_loss(x, m.alpha, sys)
    per_user = m.power / m.n_users
    directed = sys.eta * m.n_antennas * per_user * serve_gain * harvest_time
    isotropic = sys.eta * (m.n_users - 1) * per_user * serve_gain * harvest_time
    amb_m = (
        sys.eta
        * harvest_time
        * m.power
        * sys.beta
        * 2.0
        * math.pi
        * m.density
        * _ambient_kernel(x, m.alpha, sys.ref_dist)
    )
    amb_s = 0.0
    rho = cfg.macro_vs_tier(scheme)
    for t, r in zip(cfg.tiers, rho):
        excl = r * x ** (m.alpha / t.alpha)
        amb_s += (
            sys.eta
            * harvest_time
            * t.power
            * sys.beta
            * 2.0
            * math.pi
            * t.density
            * _ambient_kernel(excl, t.alpha, sys.ref_dist)
        )
    return EnergyBreakdown(directed, isotropic, amb_m, amb_s)


def cond_energy_tier_k(scheme: Scheme, k: int, y: float, cfg: NetworkConfig) -> EnergyBreakdown:
    """Mean harvested energy given tier-k association at serving distance y; k is 1-based."""
    if y < 0.0:
        raise ValueError("distance must be nonnegative")
    if not (1 <= k <= len(cfg.tiers)):
        raise ValueError(f"tier index {k} out of range")
    sys = cfg.sys
    tk = cfg.tiers[k - 1]
    harvest_time = sys.tau * sys.block_time
    isotropic = sys.eta * tk.power * path_loss(y, tk.alpha, sys) * harvest_time
    r_m = cfg.tier_vs_macro(scheme, k)
    excl_m = r_m * y ** (tk.alpha / cfg.macro.alpha)
    amb_m = (
        sys.eta
        * harvest_time
        * cfg.macro.power
        * sys.beta
        * 2.0
        * math.pi
        * cfg.macro.density
        * _ambient_kernel(excl_m, cfg.macro.alpha, sys.ref_dist)
    )
    # interferer tier power enters each term of the ambient small-cell sum
    amb_s = 0.0
    r_t = cfg.tier_vs_tier(scheme, k)
    for t, r in zip(cfg.tiers, r_t):
        excl = r * y ** (tk.alpha / t.alpha)
        amb_s += (
            sys.eta
            * harvest_time
            * t.power
            * sys.beta
            * 2.0
            * math.pi
            * t.density
            * _ambient_kernel(excl, t.alpha, sys.ref_dist)
        )
    return EnergyBreakdown(0.0, isotropic, amb_m, amb_s)


def _piecewise_mean(f, pdf, breaks, spec=_AVG_SPEC) -> float:
    """Integral of f * pdf over [0, inf), split at known kink locations."""
    total = 0.0
    lo = 0.0
    for b in sorted({b for b in breaks if b > 0.0}):
        total += integrate(lambda r: f(r) * pdf(r), lo, b, spec)
        lo = b
    total += integrate(lambda r: f(r) * pdf(r), lo, math.inf, spec)
    return total


@functools.lru_cache(maxsize=512)
def _avg_energy_macro_cached(scheme: Scheme, cfg: NetworkConfig) -> EnergyBreakdown:
    sys = cfg.sys
    m = cfg.macro
    pdf = lambda r: serving_distance_pdf(scheme, 0, r, cfg)
    harvest_time = sys.tau * sys.block_time
    per_user = m.power / m.n_users

    mean_serve = _piecewise_mean(lambda r: path_loss(r, m.alpha, sys), pdf, (sys.ref_dist,))
    directed = sys.eta * m.n_antennas * per_user * mean_serve * harvest_time
    isotropic = sys.eta * (m.n_users - 1) * per_user * mean_serve * harvest_time

    mean_k = _piecewise_mean(lambda r: _ambient_kernel(r, m.alpha, sys.ref_dist), pdf, (sys.ref_dist,))
    amb_m = sys.eta * harvest_time * m.power * sys.beta * 2.0 * math.pi * m.density * mean_k

    amb_s = 0.0
    rho = cfg.macro_vs_tier(scheme)
    for t, r in zip(cfg.tiers, rho):
        q = m.alpha / t.alpha
        boundary = r ** (-t.alpha / m.alpha) * sys.ref_dist ** (1.0 / q)
        mean_t = _piecewise_mean(
            lambda s: _ambient_kernel(r * s**q, t.alpha, sys.ref_dist), pdf, (boundary,)
        )
        amb_s += sys.eta * harvest_time * t.power * sys.beta * 2.0 * math.pi * t.density * mean_t
    return EnergyBreakdown(directed, isotropic, amb_m, amb_s)


def avg_energy_macro(scheme: Scheme, cfg: NetworkConfig) -> EnergyBreakdown:
    """Average harvested energy of a macro-associated user."""
    return _avg_energy_macro_cached(scheme, cfg)


@functools.lru_cache(maxsize=512)
def _avg_energy_tier_cached(scheme: Scheme, k: int, cfg: NetworkConfig) -> EnergyBreakdown:
    sys = cfg.sys
    tk = cfg.tiers[k - 1]
    pdf = lambda r: serving_distance_pdf(scheme, k, r, cfg)
    harvest_time = sys.tau * sys.block_time

    mean_serve = _piecewise_mean(lambda r: path_loss(r, tk.alpha, sys), pdf, (sys.ref_dist,))
    isotropic = sys.eta * tk.power * mean_serve * harvest_time

    r_m = cfg.tier_vs_macro(scheme, k)
    q_m = tk.alpha / cfg.macro.alpha
    b_m = r_m ** (-cfg.macro.alpha / tk.alpha) * sys.ref_dist ** (1.0 / q_m)
    mean_km = _piecewise_mean(
        lambda s: _ambient_kernel(r_m * s**q_m, cfg.macro.alpha, sys.ref_dist), pdf, (b_m,)
    )
    amb_m = sys.eta * harvest_time * cfg.macro.power * sys.beta * 2.0 * math.pi * cfg.macro.density * mean_km

    amb_s = 0.0
    r_t = cfg.tier_vs_tier(scheme, k)
    for t, r in zip(cfg.tiers, r_t):
        q = tk.alpha / t.alpha
        boundary = r ** (-t.alpha / tk.alpha) * sys.ref_dist ** (1.0 / q)
        mean_t = _piecewise_mean(
            lambda s: _ambient_kernel(r * s**q, t.alpha, sys.ref_dist), pdf, (boundary,)
        )
        amb_s += sys.eta * harvest_time * t.power * sys.beta * 2.0 * math.pi * t.density * mean_t
    return EnergyBreakdown(0.0, isotropic, amb_m, amb_s)


def avg_energy_tier_k(scheme: Scheme, k: int, cfg: NetworkConfig) -> EnergyBreakdown:
    """Average harvested energy of a user associated with small tier k (1-based)."""
    if not (1 <= k <= len(cfg.tiers)):
        raise ValueError(f"tier index {k} out of range")
    return _avg_energy_tier_cached(scheme, k, cfg)


# ---------------------------------------------------------------------------
# large-array closed forms
# ---------------------------------------------------------------------------

def _upper_gamma(shape: float, x: float) -> float:
    if shape > 0.0:
        return upper_incomplete_gamma(shape, x)
    return _upper_gamma_any(shape, x)


def _asym_weight(scheme: Scheme, cfg: NetworkConfig) -> float:
    raw = macro_weight_asymptotic_raw(scheme, cfg)
    if raw <= 0.0:
        raise ValueError(
            "first-order macro weight is nonpositive; the large-array expansion "
            "is out of regime for this configuration"
        )
    return raw


def xi1(x: float, scheme: Scheme, cfg: NetworkConfig) -> float:
    """CDF of the large-array macro serving distance at x."""
    lam_m = cfg.macro.density
    am = cfg.macro.alpha
    u = math.pi * lam_m * x * x
    s = 1.0 - math.exp(-u)
    for t, r in zip(cfg.tiers, cfg.macro_vs_tier(scheme)):
        ratio = am / t.alpha
        s -= math.pi * t.density * r * r * lower_incomplete_gamma(1.0 + ratio, u) / (
            math.pi * lam_m
        ) ** ratio
    return s / _asym_weight(scheme, cfg)


def xi2(a: float, b: float, scheme: Scheme, cfg: NetworkConfig) -> float:
    """Mean of x^b over [a, inf) under the large-array serving-distance density."""
    lam_m = cfg.macro.density
    am = cfg.macro.alpha
    u = math.pi * lam_m * a * a
    s = _upper_gamma(1.0 + b / 2.0, u) / (math.pi * lam_m) ** (b / 2.0)
    for t, r in zip(cfg.tiers, cfg.macro_vs_tier(scheme)):
        ratio = am / t.alpha
        s -= math.pi * t.density * r * r * _upper_gamma(1.0 + ratio + b / 2.0, u) / (
            math.pi * lam_m
        ) ** (ratio + b / 2.0)
    return s / _asym_weight(scheme, cfg)


def xi3(c: float, e: float, scheme: Scheme, cfg: NetworkConfig) -> float:
    """Mean of x^e over [0, c] under the large-array serving-distance density."""
    lam_m = cfg.macro.density
    am = cfg.macro.alpha
    u = math.pi * lam_m * c * c
    s = lower_incomplete_gamma(1.0 + e / 2.0, u) / (math.pi * lam_m) ** (e / 2.0)
    for t, r in zip(cfg.tiers, cfg.macro_vs_tier(scheme)):
        ratio = am / t.alpha
        s -= math.pi * t.density * r * r * lower_incomplete_gamma(1.0 + ratio + e / 2.0, u) / (
            math.pi * lam_m
        ) ** (ratio + e / 2.0)
    return s / _asym_weight(scheme, cfg)


def avg_energy_macro_asymptotic(scheme: Scheme, cfg: NetworkConfig) -> float:
    """Large-array closed form for the macro-associated average energy."""
    sys = cfg.sys
    m = cfg.macro
    d = sys.ref_dist
    am = m.alpha
    harvest_time = sys.tau * sys.block_time

    serve = (m.n_antennas + m.n_users - 1) * (m.power / m.n_users) * sys.beta * (
        xi1(d, scheme, cfg) * d ** (-am) + xi2(d, -am, scheme, cfg)
    )
    amb_m = (
        m.power
        * sys.beta
        * 2.0
        * math.pi
        * m.density
        * (
            d ** (2.0 - am) * am / (2.0 * (am - 2.0)) * xi1(d, scheme, cfg)
            - d ** (-am) / 2.0 * xi3(d, 2.0, scheme, cfg)
            + xi2(d, 2.0 - am, scheme, cfg) / (am - 2.0)
        )
    )
    amb_s = 0.0
    for t, r in zip(cfg.tiers, cfg.macro_vs_tier(scheme)):
        ai = t.alpha
        d_o = r ** (-ai / am) * d ** (ai / am)
        amb_s += (
            t.power
            * sys.beta
            * 2.0
            * math.pi
            * t.density
            * (
                d ** (2.0 - ai) * ai / (2.0 * (ai - 2.0)) * xi1(d_o, scheme, cfg)
                - d ** (-ai) * r * r / 2.0 * xi3(d_o, 2.0 * am / ai, scheme, cfg)
                + r ** (2.0 - ai) / (ai - 2.0) * xi2(d_o, am * (2.0 - ai) / ai, scheme, cfg)
            )
        )
    return sys.eta * (serve + amb_m + amb_s) * harvest_time


def hetnet_avg_energy(scheme: Scheme, cfg: NetworkConfig) -> float:
    """Network-wide average harvested energy: association-weighted mixture."""
    total = tier_weight(scheme, 0, cfg) * avg_energy_macro(scheme, cfg).total
    for k in range(1, len(cfg.tiers) + 1):
        total += tier_weight(scheme, k, cfg) * avg_energy_tier_k(scheme, k, cfg).total
    return total

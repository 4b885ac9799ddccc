"""Uplink transmit powers and achievable-rate analytics.

Each user spends the harvested energy of a block on the following uplink
slot, so its transmit power is the average harvested energy over the slot
length. Macro receivers multiplex many antennas, giving a law-of-large-
numbers rate lower bound against the mean interference field; small-cell
receivers see exponentially faded signals, giving an explicit SINR CCDF
through the interference Laplace transform, whose radial integrals reduce
to Gauss hypergeometric terms under the clamped path-loss law.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .association import serving_distance_pdf, tier_weight
from .energy import avg_energy_macro, avg_energy_tier_k
from .model import NetworkConfig, Scheme, path_loss
from .specialfn import QuadratureSpec, gauss_2f1_negz, integrate

__all__ = [
    "UplinkPowers",
    "stable_powers",
    "rate_lb_macro_conditional",
    "omega",
    "sinr_ccdf_tier_k",
    "rate_tier_k_conditional",
    "avg_rate_macro",
    "avg_rate_tier_k",
    "hetnet_avg_rate",
]

_THRESH_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-14, max_subdivisions=400)
_AVG_SPEC = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-14, max_subdivisions=400)


@dataclass(frozen=True)
class UplinkPowers:
    """Per-tier uplink transmit powers in watts."""

    p_macro: float
    p_tier: tuple[float, ...]
    scheme: Scheme

    def __post_init__(self) -> None:
        if not (self.p_macro > 0.0 and all(p > 0.0 for p in self.p_tier)):
            raise ValueError("uplink powers must be positive")


@functools.lru_cache(maxsize=256)
def _stable_powers_cached(scheme: Scheme, cfg: NetworkConfig) -> UplinkPowers:
    sys = cfg.sys
    slot = (1.0 - sys.tau) * sys.block_time
    if slot <= 0.0:
        raise ValueError("no uplink slot remains; tau must be below 1")
    pm = avg_energy_macro(scheme, cfg).total / slot
    pt = tuple(
        avg_energy_tier_k(scheme, k, cfg).total / slot for k in range(1, len(cfg.tiers) + 1)
    )
    return UplinkPowers(p_macro=pm, p_tier=pt, scheme=scheme)


def stable_powers(scheme: Scheme, cfg: NetworkConfig) -> UplinkPowers:
    """Maximum sustainable transmit power of each tier's users: energy per uplink second."""
    return _stable_powers_cached(scheme, cfg)


def _mean_field_kernel(alpha: float, d: float) -> float:
    """Unit-density mean of the clamped power law over the whole plane (per 2*pi*beta)."""
    return d ** (2.0 - alpha) / 2.0 + d ** (2.0 - alpha) / (alpha - 2.0)


def rate_lb_macro_conditional(
    scheme: Scheme,
    x: float,
    cfg: NetworkConfig,
    powers: UplinkPowers | None = None,
) -> float:
    """Lower bound on the mean macro uplink rate at serving distance x, bits/s/Hz.

    Signal power takes the array-combining mean; interference takes its
    spatial mean over unexcluded transmitters of every tier, which bounds
    the rate from below by convexity.
    """
    if x < 0.0:
        raise ValueError("distance must be nonnegative")
    sys = cfg.sys
    m = cfg.macro
    if powers is None:
        powers = stable_powers(scheme, cfg)
    mean_power_density = powers.p_macro * m.n_users * m.density
    for t, p in zip(cfg.tiers, powers.p_tier):
        mean_power_density += p * t.density
    lam = (
        2.0 * math.pi * sys.beta * mean_power_density * _mean_field_kernel(m.alpha, sys.ref_dist)
        + sys.noise_power
    )
    signal = powers.p_macro * (m.n_antennas - m.n_users + 1) * path_loss(x, m.alpha, sys)
    return (1.0 - sys.tau) * math.log2(1.0 + signal / lam)


def omega(s: float, k: int, cfg: NetworkConfig, powers: UplinkPowers) -> float:
    """Interference Laplace exponent at a tier-k receiver.

    One near/far term pair per transmitter class: macro users at density
    (users per cell) * (macro density) and one user per small cell. Every
    propagation path ends at the same tier-k station, so the receiving
    tier's exponent applies throughout.
    """
    if s < 0.0:
        raise ValueError("transform argument must be nonnegative")
    if not (1 <= k <= len(cfg.tiers)):
        raise ValueError(f"tier index {k} out of range")
    sys = cfg.sys
    alpha = cfg.tiers[k - 1].alpha
    d = sys.ref_dist
    b = 1.0 - 2.0 / alpha
    c = 2.0 - 2.0 / alpha
    total = 0.0
    classes = [(cfg.macro.n_users * cfg.macro.density, powers.p_macro)]
    classes += [(t.density, p) for t, p in zip(cfg.tiers, powers.p_tier)]
    for density, power in classes:
        u = s * power * sys.beta * d ** (-alpha)
        near = math.pi * density * d * d * u / (1.0 + u)
        far = (
            2.0
            * math.pi
            * density
            * d
            * d
            * u
            / (alpha - 2.0)
            * gauss_2f1_negz(1.0, b, c, -u)
        )
        total += near + far
    return total


def sinr_ccdf_tier_k(
    scheme: Scheme,
    k: int,
    y: float,
    threshold: float,
    cfg: NetworkConfig,
    powers: UplinkPowers | None = None,
) -> float:
    """P(uplink SINR > threshold) at a tier-k station serving from distance y."""
    if threshold < 0.0:
        raise ValueError("threshold must be nonnegative")
    if y < 0.0:
        raise ValueError("distance must be nonnegative")
    if powers is None:
        powers = stable_powers(scheme, cfg)
    sys = cfg.sys
    received = powers.p_tier[k - 1] * path_loss(y, cfg.tiers[k - 1].alpha, sys)
    s = threshold / received
    return math.exp(-s * sys.noise_power - omega(s, k, cfg, powers))


def rate_tier_k_conditional(
    scheme: Scheme,
    k: int,
    y: float,
    cfg: NetworkConfig,
    powers: UplinkPowers | None = None,
) -> float:
    """Mean tier-k uplink rate at serving distance y, bits/s/Hz.

    Mean of log2(1+SINR) written as the threshold integral of the CCDF;
    substituting threshold = e^u - 1 flattens the heavy head at zero.
    """
    if powers is None:
        powers = stable_powers(scheme, cfg)
    sys = cfg.sys
    if sys.tau >= 1.0:
        return 0.0
    ccdf_log = lambda u: sinr_ccdf_tier_k(scheme, k, y, math.expm1(u), cfg, powers)
    return (1.0 - sys.tau) / math.log(2.0) * integrate(ccdf_log, 0.0, math.inf, _THRESH_SPEC)


def _mean_over_pdf(f, scheme: Scheme, tier: int, cfg: NetworkConfig) -> float:
    pdf = lambda r: serving_distance_pdf(scheme, tier, r, cfg)
    d = cfg.sys.ref_dist
    head = integrate(lambda r: f(r) * pdf(r), 0.0, d, _AVG_SPEC)
    tail = integrate(lambda r: f(r) * pdf(r), d, math.inf, _AVG_SPEC)
    return head + tail


@functools.lru_cache(maxsize=256)
def _avg_rate_macro_cached(scheme: Scheme, cfg: NetworkConfig) -> float:
    powers = stable_powers(scheme, cfg)
    return _mean_over_pdf(
        lambda x: rate_lb_macro_conditional(scheme, x, cfg, powers), scheme, 0, cfg
    )


def avg_rate_macro(scheme: Scheme, cfg: NetworkConfig) -> float:
    """Average macro uplink rate lower bound over the serving-distance density."""
    return _avg_rate_macro_cached(scheme, cfg)


@functools.lru_cache(maxsize=256)
def _avg_rate_tier_cached(scheme: Scheme, k: int, cfg: NetworkConfig) -> float:
    powers = stable_powers(scheme, cfg)
    return _mean_over_pdf(
        lambda y: rate_tier_k_conditional(scheme, k, y, cfg, powers), scheme, k, cfg
    )


def avg_rate_tier_k(scheme: Scheme, k: int, cfg: NetworkConfig) -> float:
    """Average tier-k uplink rate over the serving-distance density."""
    if not (1 <= k <= len(cfg.tiers)):
        raise ValueError(f"tier index {k} out of range")
    return _avg_rate_tier_cached(scheme, k, cfg)


def hetnet_avg_rate(scheme: Scheme, cfg: NetworkConfig) -> float:
    """Network-wide average uplink rate: association-weighted mixture."""
    total = tier_weight(scheme, 0, cfg) * avg_rate_macro(scheme, cfg)
    for k in range(1, len(cfg.tiers) + 1):
        total += tier_weight(scheme, k, cfg) * avg_rate_tier_k(scheme, k, cfg)
    return total

"""Configuration types and derived constants shared by every engine.

A network is one macro tier (large antenna array, multi-user downlink
beamforming) plus any number of single-antenna small-cell tiers, all drawn
from independent homogeneous Poisson point processes. Powers are stored in
watts; dBm conversion happens at the CLI boundary.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

__all__ = [
    "Scheme",
    "SystemParams",
    "MacroTier",
    "SmallTier",
    "BiasRadii",
    "NetworkConfig",
    "path_loss",
    "derive_bias_radii",
    "dbm_to_watts",
    "watts_to_dbm",
    "beta_from_carrier",
]


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0.0:
        raise ValueError("power must be positive")
    return 10.0 * math.log10(watts) + 30.0


def beta_from_carrier(freq_hz: float, light_speed: float = 3.0e8) -> float:
    """Free-space intercept (c / (4 pi f))^2 of the clamped power-law model."""
    if freq_hz <= 0.0:
        raise ValueError("carrier frequency must be positive")
    return (light_speed / (4.0 * math.pi * freq_hz)) ** 2


class Scheme(enum.Enum):
    """User-association rule.

    DRSP: join the station offering the strongest average downlink received
    power, which folds the macro array gain and per-user power split into a
    bias of (N+S-1)/S on the macro tier.
    URSP: join the station with the smallest uplink path loss after receive
    combining, biasing the macro tier by N-S+1.
    """

    DRSP = "DRSP"
    URSP = "URSP"


@dataclass(frozen=True)
class SystemParams:
    """Propagation and air-interface constants.

    beta: path-loss intercept at 1 m, (c / (4 pi f))^2.
    ref_dist: clamp distance in meters; closer ranges see constant loss.
    eta: RF-to-DC rectifier efficiency in (0, 1).
    tau: fraction of each block spent harvesting (the rest is uplink).
    block_time: block duration in seconds.
    noise_power: receiver noise floor in watts.
    """

    beta: float
    ref_dist: float = 1.0
    eta: float = 0.9
    tau: float = 0.5
    block_time: float = 1.0
    noise_power: float = 1e-12

    def __post_init__(self) -> None:
        if not (self.beta > 0.0):
            raise ValueError("beta must be positive")
        if not (self.ref_dist > 0.0):
            raise ValueError("ref_dist must be positive")
        if not (0.0 < self.eta < 1.0):
            raise ValueError("eta must lie in (0, 1)")
        if not (0.0 <= self.tau <= 1.0):
            raise ValueError("tau must lie in [0, 1]")
        if not (self.block_time > 0.0):
            raise ValueError("block_time must be positive")
        if not (self.noise_power > 0.0):
            raise ValueError("noise_power must be positive")


@dataclass(frozen=True)
class MacroTier:
    """Macro-cell tier: PPP density, transmit power, exponent, array size, load."""

    density: float
    power: float
    alpha: float
    n_antennas: int
    n_users: int

    def __post_init__(self) -> None:
        if not (self.density > 0.0):
            raise ValueError("macro density must be positive")
        if not (self.power > 0.0):
            raise ValueError("macro power must be positive")
        if not (self.alpha > 2.0):
            raise ValueError("path-loss exponent must exceed 2")
        if not (1 <= self.n_users < self.n_antennas):
            raise ValueError("need 1 <= n_users < n_antennas")


@dataclass(frozen=True)
class SmallTier:
    """Single-antenna small-cell tier serving one user per station."""

    density: float
    power: float
    alpha: float

    def __post_init__(self) -> None:
        # Zero density is a legal degenerate tier (an empty point process that
        # contributes nothing); per-tier conditional quantities are undefined
        # for it, so callers asking for those must use a positive density.
        if not (self.density >= 0.0):
            raise ValueError("tier density must be nonnegative")
        if not (self.power > 0.0):
            raise ValueError("tier power must be positive")
        if not (self.alpha > 2.0):
            raise ValueError("path-loss exponent must exceed 2")


@dataclass(frozen=True)
class BiasRadii:
    """Distance-scale factors of the biased association comparisons.

    The macro tier, seen from a user, competes with effective bias gain_dl =
    N+S-1 on the downlink (per-user share times array gain) and gain_ul =
    N-S+1 on the uplink. Each factor below converts a candidate serving
    distance of one tier into the exclusion radius it imposes on another
    tier's nearest station; exponents follow the tier whose distance is
    being bounded.

    dl_macro_vs_tier[i]: macro serving at x excludes tier-i stations inside
        dl_macro_vs_tier[i] * x^(alpha_m / alpha_i)   (downlink rule)
    dl_tier_vs_macro[k]: tier-k serving at y excludes macro stations inside
        dl_tier_vs_macro[k] * y^(alpha_k / alpha_m)
    dl_tier_vs_tier[k][i]: tier-k serving at y excludes tier-i stations
        inside dl_tier_vs_tier[k][i] * y^(alpha_k / alpha_i)
    ul_macro_vs_tier[i], ul_tier_vs_macro: uplink equivalents; the uplink
        tier-vs-tier factor is exactly 1 (pure path-loss comparison).
    """

    gain_dl: float
    gain_ul: float
    dl_macro_vs_tier: tuple[float, ...]
    dl_tier_vs_macro: tuple[float, ...]
    dl_tier_vs_tier: tuple[tuple[float, ...], ...]
    ul_macro_vs_tier: tuple[float, ...]
    ul_tier_vs_macro: float


def derive_bias_radii(macro: MacroTier, tiers: tuple[SmallTier, ...]) -> BiasRadii:
    """Closed-form bias factors for both association schemes."""
    gain_dl = float(macro.n_antennas + macro.n_users - 1)
    gain_ul = float(macro.n_antennas - macro.n_users + 1)
    ps = macro.power / macro.n_users
    dl_mt = tuple((gain_dl * ps / t.power) ** (-1.0 / t.alpha) for t in tiers)
    dl_tm = tuple((t.power / (gain_dl * ps)) ** (-1.0 / macro.alpha) for t in tiers)
    dl_tt = tuple(
        tuple((tk.power / ti.power) ** (-1.0 / ti.alpha) for ti in tiers) for tk in tiers
    )
    ul_mt = tuple(gain_ul ** (-1.0 / t.alpha) for t in tiers)
    ul_tm = (1.0 / gain_ul) ** (-1.0 / macro.alpha)
    return BiasRadii(
        gain_dl=gain_dl,
        gain_ul=gain_ul,
        dl_macro_vs_tier=dl_mt,
        dl_tier_vs_macro=dl_tm,
        dl_tier_vs_tier=dl_tt,
        ul_macro_vs_tier=ul_mt,
        ul_tier_vs_macro=ul_tm,
    )


@functools.lru_cache(maxsize=256)
def _radii_cached(macro: MacroTier, tiers: tuple[SmallTier, ...]) -> BiasRadii:
    return derive_bias_radii(macro, tiers)


@dataclass(frozen=True)
class NetworkConfig:
    """Full network description: system constants, macro tier, small tiers."""

    sys: SystemParams
    macro: MacroTier
    tiers: tuple[SmallTier, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tiers", tuple(self.tiers))

    @property
    def radii(self) -> BiasRadii:
        return _radii_cached(self.macro, self.tiers)

    def macro_bias(self, scheme: Scheme) -> float:
        """Effective macro association bias: gain_dl / S downlink, gain_ul uplink."""
        if scheme is Scheme.DRSP:
            return self.radii.gain_dl / self.macro.n_users
        return self.radii.gain_ul

    def macro_vs_tier(self, scheme: Scheme) -> tuple[float, ...]:
        return self.radii.dl_macro_vs_tier if scheme is Scheme.DRSP else self.radii.ul_macro_vs_tier

    def tier_vs_macro(self, scheme: Scheme, k: int) -> float:
        """k is a 1-based small-tier index."""
        if scheme is Scheme.DRSP:
            return self.radii.dl_tier_vs_macro[k - 1]
        return self.radii.ul_tier_vs_macro

    def tier_vs_tier(self, scheme: Scheme, k: int) -> tuple[float, ...]:
        if scheme is Scheme.DRSP:
            return self.radii.dl_tier_vs_tier[k - 1]
        return tuple(1.0 for _ in self.tiers)


def path_loss(dist: float, alpha: float, sys: SystemParams) -> float:
    """Clamped power law beta * max(dist, ref_dist)^(-alpha)."""
    if dist < 0.0:
        raise ValueError("distance must be nonnegative")
    return sys.beta * max(dist, sys.ref_dist) ** (-alpha)

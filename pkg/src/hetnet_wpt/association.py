"""Association probabilities and serving-distance densities.

Both association rules reduce to biased comparisons of per-tier nearest
distances: the tier-j nearest station must lie beyond a power of the
candidate serving distance, scaled by the bias factors in BiasRadii. The
void probabilities of the excluded discs give every density in closed form
up to one radial integral, evaluated here by adaptive quadrature.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .model import NetworkConfig, Scheme
from .specialfn import QuadratureSpec, integrate

__all__ = [
    "AssociationResult",
    "AsymptoticProb",
    "serving_distance_pdf",
    "assoc_prob",
    "assoc_prob_macro_asymptotic",
    "tier_weight",
]

_PSI_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=0.0, max_subdivisions=400)


@dataclass(frozen=True)
class AssociationResult:
    """Per-tier association probabilities; index 0 of prob_tier is the first small tier."""

    prob_macro: float
    prob_tier: tuple[float, ...]
    scheme: Scheme

    @property
    def total(self) -> float:
        return self.prob_macro + sum(self.prob_tier)


@dataclass(frozen=True)
class AsymptoticProb:
    """First-order large-array macro association probability.

    value is clamped to [0, 1]; raw keeps the unclamped expansion and
    clamped flags an out-of-regime evaluation (small arrays can push the
    truncated series negative).
    """

    value: float
    raw: float
    clamped: bool


def _macro_log_survival(scheme: Scheme, cfg: NetworkConfig, x: float) -> float:
    """log P(every competing station loses to a macro candidate at x)."""
    am = cfg.macro.alpha
    rho = cfg.macro_vs_tier(scheme)
    s = -math.pi * cfg.macro.density * x * x
    for t, r in zip(cfg.tiers, rho):
        s -= math.pi * t.density * r * r * x ** (2.0 * am / t.alpha)
    return s


def _tier_log_survival(scheme: Scheme, cfg: NetworkConfig, k: int, y: float) -> float:
    """log P(every competing station loses to a tier-k candidate at y); k is 1-based."""
    ak = cfg.tiers[k - 1].alpha
    r_m = cfg.tier_vs_macro(scheme, k)
    r_t = cfg.tier_vs_tier(scheme, k)
    s = -math.pi * cfg.macro.density * r_m * r_m * y ** (2.0 * ak / cfg.macro.alpha)
    for t, r in zip(cfg.tiers, r_t):
        s -= math.pi * t.density * r * r * y ** (2.0 * ak / t.alpha)
    return s


def _unnormalized_pdf(scheme: Scheme, tier: int, x: float, cfg: NetworkConfig) -> float:
    if x < 0.0:
        raise ValueError("distance must be nonnegative")
    if x == 0.0:
        return 0.0
    if tier == 0:
        lam = cfg.macro.density
        return 2.0 * math.pi * lam * x * math.exp(_macro_log_survival(scheme, cfg, x))
    lam = cfg.tiers[tier - 1].density
    return 2.0 * math.pi * lam * x * math.exp(_tier_log_survival(scheme, cfg, tier, x))


@functools.lru_cache(maxsize=4096)
def _tier_weight_cached(scheme: Scheme, tier: int, cfg: NetworkConfig) -> float:
    return integrate(lambda r: _unnormalized_pdf(scheme, tier, r, cfg), 0.0, math.inf, _PSI_SPEC)


def tier_weight(scheme: Scheme, tier: int, cfg: NetworkConfig) -> float:
    """Probability of associating with the given tier (0 = macro, k >= 1 small).

    Each weight is an independent radial integral; they are not forced to
    sum to one, which keeps the total-probability identity a real check.
    """
    if not (0 <= tier <= len(cfg.tiers)):
        raise ValueError(f"tier index {tier} out of range")
    return _tier_weight_cached(scheme, tier, cfg)


def serving_distance_pdf(scheme: Scheme, tier: int, x: float, cfg: NetworkConfig) -> float:
    """Density of the serving distance conditioned on association with tier."""
    psi = tier_weight(scheme, tier, cfg)
    return _unnormalized_pdf(scheme, tier, x, cfg) / psi


def assoc_prob(scheme: Scheme, cfg: NetworkConfig) -> AssociationResult:
    """Association probability of each tier under the given scheme."""
    pm = tier_weight(scheme, 0, cfg)
    pts = tuple(tier_weight(scheme, k, cfg) for k in range(1, len(cfg.tiers) + 1))
    return AssociationResult(prob_macro=pm, prob_tier=pts, scheme=scheme)


def macro_weight_asymptotic_raw(scheme: Scheme, cfg: NetworkConfig) -> float:
    """Unclamped first-order macro weight for large arrays.

    The small-tier exclusion factors are expanded to first order, turning
    the radial integral into complete gamma functions.
    """
    lam_m = cfg.macro.density
    alpha_m = cfg.macro.alpha
    rho = cfg.macro_vs_tier(scheme)
    s = 1.0
    for t, r in zip(cfg.tiers, rho):
        ratio = alpha_m / t.alpha
        s -= math.pi * t.density * r * r * math.gamma(1.0 + ratio) / (math.pi * lam_m) ** ratio
    return s


def assoc_prob_macro_asymptotic(scheme: Scheme, cfg: NetworkConfig) -> AsymptoticProb:
    raw = macro_weight_asymptotic_raw(scheme, cfg)
    value = min(1.0, max(0.0, raw))
    return AsymptoticProb(value=value, raw=raw, clamped=(value != raw))

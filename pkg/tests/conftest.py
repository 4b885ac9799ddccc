"""Shared fixtures: reference configurations and a small independent
association oracle based on direct nearest-distance sampling.

Association depends only on the per-tier nearest distances, whose survival
function exp(-pi lambda r^2) can be inverted exactly, so this oracle needs
no spatial window at all and shares no code with the package's simulator.
"""

import numpy as np
import pytest

from hetnet_wpt.model import (
    MacroTier,
    NetworkConfig,
    Scheme,
    SmallTier,
    SystemParams,
    beta_from_carrier,
    dbm_to_watts,
)

BETA_1GHZ = beta_from_carrier(1e9)


def build_cfg(
    *,
    lam_m=1e-3,
    p_m_dbm=46.0,
    alpha_m=3.5,
    n_antennas=100,
    n_users=5,
    tiers=((5e-3, 30.0, 4.0),),
    tau=0.5,
    eta=0.9,
    block_time=1.0,
    noise_dbm=-90.0,
):
    sys = SystemParams(
        beta=BETA_1GHZ,
        ref_dist=1.0,
        eta=eta,
        tau=tau,
        block_time=block_time,
        noise_power=dbm_to_watts(noise_dbm),
    )
    macro = MacroTier(
        density=lam_m, power=dbm_to_watts(p_m_dbm), alpha=alpha_m,
        n_antennas=n_antennas, n_users=n_users,
    )
    small = tuple(SmallTier(density=d, power=dbm_to_watts(p), alpha=a) for d, p, a in tiers)
    return NetworkConfig(sys=sys, macro=macro, tiers=small)


def fig2_cfg(n_antennas=100, n_users=5):
    return build_cfg(alpha_m=3.5, n_antennas=n_antennas, n_users=n_users,
                     tiers=((5e-3, 30.0, 4.0),), tau=0.6)


def fig3_cfg(n_antennas=128, n_users=20, p2_dbm=30.0):
    return build_cfg(alpha_m=3.0, n_antennas=n_antennas, n_users=n_users,
                     tiers=((20e-3, p2_dbm, 3.5),), tau=0.6)


def fig7_cfg(n_antennas=128, n_users=10):
    return build_cfg(alpha_m=2.8, n_antennas=n_antennas, n_users=n_users,
                     tiers=((5e-3, 30.0, 2.5),), tau=0.3)


def three_tier_cfg(n_antennas=128, n_users=5):
    return build_cfg(alpha_m=3.0, n_antennas=n_antennas, n_users=n_users,
                     tiers=((20e-3, 38.0, 3.5), (30e-3, 35.0, 4.0)), tau=0.6)


def nearest_distance_oracle(cfg, scheme, n, seed):
    """Association frequencies and macro serving distances by direct sampling.

    Returns (freq_macro, freq_tiers, macro_win_distances).
    """
    rng = np.random.default_rng(seed)
    xm = np.sqrt(rng.exponential(size=n) / (np.pi * cfg.macro.density))
    xts = [np.sqrt(rng.exponential(size=n) / (np.pi * t.density)) for t in cfg.tiers]
    if scheme is Scheme.DRSP:
        macro_metric = (cfg.radii.gain_dl * cfg.macro.power / cfg.macro.n_users) * xm ** (-cfg.macro.alpha)
        tier_metrics = [t.power * x ** (-t.alpha) for t, x in zip(cfg.tiers, xts)]
    else:
        macro_metric = cfg.radii.gain_ul * xm ** (-cfg.macro.alpha)
        tier_metrics = [x ** (-t.alpha) for t, x in zip(cfg.tiers, xts)]
    stack = np.vstack([macro_metric] + tier_metrics)
    winner = np.argmax(stack, axis=0)
    freq_macro = float(np.mean(winner == 0))
    freq_tiers = [float(np.mean(winner == k + 1)) for k in range(len(cfg.tiers))]
    return freq_macro, freq_tiers, xm[winner == 0]

"""Harvested-energy and uplink-rate analysis for multi-tier cellular networks.

Closed-form association, energy, and rate expressions for a network of
large-array macro cells overlaid with single-antenna small-cell tiers, with
a seedable Monte Carlo simulator for cross-validation.
"""

__version__ = "0.1.0"

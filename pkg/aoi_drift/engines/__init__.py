"""
Computational engines of the aoi_drift toolkit.

This package contains the three independent ways of obtaining AoI statistics:
- analytic: closed-form pmfs, joint distributions, means and p_max
- dtmc: truncated Markov-chain oracle solved numerically
- sim: seeded slot-level Monte Carlo with two-view consistency checks
"""

from . import analytic, dtmc, sim

__all__ = ["analytic", "dtmc", "sim"]

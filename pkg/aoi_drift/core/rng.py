"""Seeded random streams for reproducible simulation runs.

Every stream is a numpy ``Generator`` over the PCG64 bit generator
(128-bit state, period 2^128). PCG64 output is defined bit-for-bit by the
algorithm, so identical seeds replay identical uniform sequences on every
platform. All sampling in the toolkit consumes one double per draw from
``uniform``/``uniforms``; a block draw of ``n`` values equals ``n`` scalar draws.
"""

from __future__ import annotations

import numpy as np

from ..errors import BadParameter

SEED_MASK = (1 << 64) - 1


def derive_seed(base: int, index: int) -> int:
    """Seed for the ``index``-th independent run of a sweep (``base XOR index``)."""
    return (base ^ index) & SEED_MASK


class RngStream:
    """Single-owner uniform stream over PCG64.

    Args:
        seed: 64-bit unsigned integer seed.

    Raises:
        BadParameter: If the seed lies outside [0, 2^64).
    """

    def __init__(self, seed: int):
        if not 0 <= seed <= SEED_MASK:
            raise BadParameter(
                f"seed must be a 64-bit unsigned integer, got {seed}",
                "seed_range",
                {"seed": seed},
            )
        self._seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))

    @property
    def seed(self) -> int:
        return self._seed

    def uniform(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` successive draws from U[0, 1) as a float64 array."""
        return self._gen.random(n)

    def fork(self, index: int) -> RngStream:
        """Independent stream for sub-run ``index`` (seed derived by XOR)."""
        return RngStream(derive_seed(self._seed, index))

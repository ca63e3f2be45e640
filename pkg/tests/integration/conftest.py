"""
Fixtures for the acceptance runs.

These tests simulate 10^6 slots per grid point; select them with ``-m integration``.
"""

import logging
import os

import pytest

from aoi_drift.core import DEFAULT_SLOTS

# Slot count per simulated point, overridable for quicker local runs
ACCEPTANCE_SLOTS = int(os.environ.get("AOI_DRIFT_ACCEPTANCE_SLOTS", str(DEFAULT_SLOTS)))

# Set up logging for clearer test output
logging.basicConfig(level=logging.INFO)


@pytest.fixture(scope="session")
def n_slots() -> int:
    """Simulated slots per grid point."""
    return ACCEPTANCE_SLOTS

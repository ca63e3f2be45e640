"""
Shared pytest setup: async test mode and hypothesis profiles.
"""

import os

from hypothesis import settings

pytest_plugins = ["pytest_asyncio"]

# Property tests are reproducible by default; HYPOTHESIS_PROFILE=thorough
# explores more parameter draws.
settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    config.option.asyncio_mode = "auto"
    config.option.asyncio_default_fixture_loop_scope = "function"

"""Shared fixtures."""

import numpy as np
import pytest

from src.atlas.analytic import fourth_order_point
from src.checks.suite import random_params as draw_params
from src.checks.suite import random_state as draw_state

# coarse but accurate for the smooth protocols; acceptance tests use the default
FAST_STEPS = 100


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_params(rng):
    return lambda: draw_params(rng)


@pytest.fixture
def random_state(rng):
    return lambda: draw_state(rng)


@pytest.fixture
def fourth_order_params():
    return fourth_order_point().to_params()


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Redirect default CLI outputs into a temporary directory."""
    from src.config.settings import settings

    monkeypatch.setattr(settings.config, "output_data_path", str(tmp_path / "processed"))
    return tmp_path

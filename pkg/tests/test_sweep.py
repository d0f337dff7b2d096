"""Tests for protocol sweeps."""

import numpy as np
import pytest

import src.evolution.sweep as sweep_module
from src.constants import SWEEP_COLUMNS
from src.core.exceptions import IntegrationFault, ParameterRangeError, SweepPointError
from src.evolution.sweep import sweep_parameter, sweep_q0
from tests.conftest import FAST_STEPS


def test_single_point_table():
    frame = sweep_q0("flat", [1.0], 1, steps_per_unit_time=FAST_STEPS)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert len(frame) == 1
    row = frame.iloc[0]
    assert row["kind"] == "flat" and row["chi"] == 1 and row["T"] == 100.0
    assert row["P"] == pytest.approx(1.0, abs=1e-9)
    assert row["F_raw"] == pytest.approx(row["F_normalized"] * row["P"])


def test_grid_order_preserved():
    grid = [0.8, 0.2, 0.5]
    frame = sweep_q0("flat", grid, 1, {"T": 10.0}, steps_per_unit_time=FAST_STEPS)
    assert frame["q0"].tolist() == grid


def test_q0_outside_range():
    with pytest.raises(ParameterRangeError) as info:
        sweep_q0("tilted", [0.0, 1.2], 1)
    assert info.value.name == "q0"


def test_tilted_probability_increases_with_q0():
    frame = sweep_q0("tilted", [0.2, 0.6, 1.0], 1, steps_per_unit_time=FAST_STEPS)
    assert np.all(np.diff(frame["P"]) > 0)


def test_sweep_other_parameter():
    frame = sweep_parameter("flat", "alpha_max", [1.0, 2.0], -1, {"q0": 0.5, "T": 10.0},
                            steps_per_unit_time=FAST_STEPS)
    assert frame.columns[-1] == "alpha_max"
    assert frame["alpha_max"].tolist() == [1.0, 2.0]
    assert (frame["chi"] == -1).all()


def test_sweep_total_time_keeps_columns():
    frame = sweep_parameter("hopping", "T", [20.0, 40.0], 1, {"q0": 1.0},
                            steps_per_unit_time=FAST_STEPS)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert frame["T"].tolist() == pytest.approx([20.0, 40.0])


def test_failing_point(monkeypatch):
    def broken(*args, **kwargs):
        raise IntegrationFault("trace exceeded 1", {"t": 1.0})

    monkeypatch.setattr(sweep_module, "integrate", broken)
    with pytest.raises(SweepPointError) as info:
        sweep_q0("flat", [0.5], 1)
    assert info.value.parameter == "q0" and info.value.value == 0.5

    frame = sweep_q0("flat", [0.5, 1.0], 1, record_errors=True)
    assert frame.columns[-1] == "error"
    assert frame["error"].notna().all()
    assert frame["P"].isna().all()


def test_parallel_sweep_matches_sequential():
    options = {"steps_per_unit_time": FAST_STEPS}
    grid = [0.3, 0.9]
    sequential = sweep_q0("flat", grid, 1, {"T": 5.0}, **options)
    parallel = sweep_q0("flat", grid, 1, {"T": 5.0}, workers=2, **options)
    np.testing.assert_array_equal(sequential["P"].to_numpy(), parallel["P"].to_numpy())

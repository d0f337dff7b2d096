"""End-to-end reproduction runs at the reference protocol parameters."""

import math

import numpy as np
import pytest

from src.atlas.analytic import fourth_order_point
from src.atlas.scanner import match_to_branches, scan_numeric
from src.config.models import EpMapConfig
from src.constants import REFERENCE_OMEGA
from src.evolution.integrator import integrate
from src.evolution.metrics import state_fidelity
from src.evolution.sweep import sweep_q0
from src.evolution.trajectories import build_trajectory

pytestmark = pytest.mark.slow

Q0_GRID = np.linspace(0.0, 1.0, 11)


@pytest.fixture(scope="module")
def sweeps():
    grid = Q0_GRID[::2]
    return {kind: sweep_q0(kind, grid, chi=1) for kind in ("tilted", "flat", "hopping")}


def test_reference_runs_use_unit_coherent_coupling():
    for kind in ("tilted", "flat", "hopping"):
        assert build_trajectory(kind).omega == REFERENCE_OMEGA == 2.0


def test_hopping_converts_for_every_q0():
    frame = sweep_q0("hopping", Q0_GRID, chi=1, params={"T1": 20.0, "T2": 60.0})
    assert (frame["F_normalized"] > 0.999).all()
    assert frame["P"].iloc[-1] > 0.999


def test_tilted_probability_and_flat_fidelity(sweeps):
    tilted = sweeps["tilted"]
    # order 1e-2 at q0 = 1; about 0.033 at the reference parameters
    assert 3e-3 <= tilted["P"].iloc[-1] <= 5e-2
    F = tilted["F_normalized"]
    assert (F.max() - F.min()) / F.max() < 0.01

    flat = sweeps["flat"]
    assert flat["P"].iloc[-1] == pytest.approx(1.0, abs=1e-6)
    assert (flat["F_normalized"] >= 0.9).all()


def test_protocol_ordering(sweeps):
    tilted, flat, hopping = sweeps["tilted"], sweeps["flat"], sweeps["hopping"]
    assert (flat["P"].to_numpy() >= tilted["P"].to_numpy() - 1e-12).all()
    assert (hopping["F_normalized"].to_numpy() >= flat["F_normalized"].to_numpy()).all()
    assert flat["P"].iloc[0] == pytest.approx(tilted["P"].iloc[0], abs=1e-12)
    assert flat["F_normalized"].iloc[0] == pytest.approx(tilted["F_normalized"].iloc[0], abs=1e-12)


@pytest.mark.parametrize("kind", ["tilted", "flat", "hopping"])
def test_conservation_along_protocols(kind):
    result = integrate(build_trajectory(kind, q0=0.5))
    assert result.diagnostics.max_hermiticity_deviation <= 1e-8
    assert result.diagnostics.min_eigenvalue >= -1e-8


@pytest.mark.parametrize("kind", ["tilted", "flat", "hopping"])
def test_chirality_symmetry(kind):
    runs = {chi: integrate(build_trajectory(kind, q0=0.7, chi=chi)) for chi in (1, -1)}
    F = {chi: state_fidelity(run.final_state, chi) for chi, run in runs.items()}
    assert F[1] == pytest.approx(F[-1], abs=1e-6)
    assert runs[1].probability == pytest.approx(runs[-1].probability, abs=1e-6)


@pytest.mark.parametrize("kind", ["tilted", "flat", "hopping"])
def test_reference_runs_are_step_converged(kind):
    trajectory = build_trajectory(kind, q0=1.0)
    coarse, fine = (integrate(trajectory, steps_per_unit_time=spu) for spu in (1000, 2000))
    assert abs(coarse.fidelity_plus - fine.fidelity_plus) < 1e-8
    assert abs(coarse.probability - fine.probability) < 1e-8


def test_single_fourth_order_degeneracy():
    grid = EpMapConfig().grid_for(4)
    assert grid.alpha.start <= 0.1 and grid.alpha.stop >= 3.0
    assert grid.q.start == 0.0 and grid.q.stop == 1.0
    result = scan_numeric(grid, 4)
    assert len(result.records) == 1
    np.testing.assert_allclose(
        result.records[0].params.controls, fourth_order_point().coordinates, atol=1e-6
    )
    assert result.records[0].label == "EP3"
    np.testing.assert_allclose(fourth_order_point().coordinates, (1.0, math.pi / 2, 0.0))


def test_line_scan_matches_analytic_lines():
    result = scan_numeric(EpMapConfig().grid_for(3), 3)
    assert result.records
    matches = match_to_branches(result.records)
    assert max(distance for _, distance in matches) <= 1e-6
    assert {branch for branch, _ in matches} <= {"third-order-line-1", "third-order-line-2"}

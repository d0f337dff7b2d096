"""Tests for fidelity, postselection probability and the gap report."""

import numpy as np
import pytest

from src.constants import GAP_COLUMNS
from src.core.exceptions import UndefinedFidelityError
from src.core.states import DensityMatrix, ReferenceStates
from src.evolution.integrator import integrate
from src.evolution.metrics import (
    eigenvalue_gaps,
    fidelity,
    postselection_probability,
    state_fidelity,
)
from src.evolution.trajectories import make_custom, make_tilted


def test_fidelity_of_reference_states():
    plus = ReferenceStates.projector("plus")
    assert state_fidelity(plus, 1) == pytest.approx(1.0)
    assert state_fidelity(plus, -1) == pytest.approx(0.0, abs=1e-15)
    assert state_fidelity(ReferenceStates.initial_state("mixed"), -1) == pytest.approx(0.5)


def test_normalized_and_raw_fidelity():
    rho = DensityMatrix(0.4 * ReferenceStates.projector("minus").matrix)
    assert state_fidelity(rho, -1) == pytest.approx(1.0)
    assert state_fidelity(rho, -1, normalized=False) == pytest.approx(0.4)


def test_zero_trace_fidelity_undefined():
    with pytest.raises(UndefinedFidelityError):
        state_fidelity(DensityMatrix(np.zeros((2, 2)), validate=False), 1)
    assert state_fidelity(DensityMatrix(np.zeros((2, 2)), validate=False), 1,
                          normalized=False) == 0.0


def test_result_level_metrics():
    result = integrate(make_custom(lambda t: (0.5, 0.0, 0.0), T=1.0),
                       ReferenceStates.projector("plus"))
    # no-jump decay of the excited population: P = (1 + e^-1) / 2
    assert postselection_probability(result) == pytest.approx((1 + np.exp(-1.0)) / 2, abs=1e-9)
    assert fidelity(result, 1) == pytest.approx(result.fidelity_plus)
    assert fidelity(result, 1, normalized=False) == pytest.approx(
        result.fidelity_plus * result.probability
    )


def test_eigenvalue_gaps():
    frame = eigenvalue_gaps(make_tilted(q0=0.5), samples=11)
    assert list(frame.columns) == GAP_COLUMNS
    assert len(frame) == 11
    assert (frame["min_gap"] >= 0).all()
    assert frame["alpha"].iloc[0] == 0.0

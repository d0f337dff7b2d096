"""Tests for parameters, states and the error hierarchy."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.exceptions import (
    AtlasDomainError,
    HybridLiouvillianError,
    IntegrationFault,
    ParameterRangeError,
    UndefinedFidelityError,
)
from src.core.params import SystemParams
from src.core.states import (
    DensityMatrix,
    LiouvilleVector,
    ReferenceStates,
    devectorize,
    vectorize,
)


def test_from_alpha_sets_gamma():
    p = SystemParams.from_alpha(1.5, 1.0, 0.2, omega=2.0)
    assert p.gamma == pytest.approx(6.0)
    assert p.alpha == pytest.approx(1.5)
    assert p.controls == pytest.approx((1.5, 1.0, 0.2))


def test_field_components():
    p = SystemParams(omega=2.0, theta=math.pi / 6, gamma=1.0, q=0.5)
    assert p.omega_x == pytest.approx(1.0)
    assert p.omega_z == pytest.approx(math.sqrt(3))


@pytest.mark.parametrize(
    "fields",
    [{"q": 1.5}, {"q": -0.1}, {"theta": 4.0}, {"gamma": -1.0}, {"omega": -1.0}],
)
def test_params_out_of_range(fields):
    with pytest.raises(ValidationError):
        SystemParams(**fields)


def test_negative_alpha_rejected():
    with pytest.raises(ParameterRangeError) as info:
        SystemParams.from_alpha(-0.1, 1.0, 0.0)
    assert info.value.name == "alpha"


def test_alpha_needs_positive_omega():
    with pytest.raises(ParameterRangeError):
        SystemParams(omega=0.0, gamma=1.0).alpha


def test_params_are_frozen():
    p = SystemParams()
    with pytest.raises(ValidationError):
        p.q = 0.5


def test_parameter_range_error_message():
    error = ParameterRangeError("q0", 1.5, "[0, 1]")
    assert isinstance(error, ValueError)
    assert isinstance(error, HybridLiouvillianError)
    assert "q0" in str(error) and "[0, 1]" in str(error)
    assert issubclass(AtlasDomainError, ParameterRangeError)


def test_integration_fault_carries_diagnostics():
    fault = IntegrationFault("trace exceeded 1", {"t": 3.0, "trace": 1.1})
    assert isinstance(fault, ArithmeticError)
    assert fault.diagnostics["t"] == 3.0
    assert "trace=1.1" in str(fault)
    assert issubclass(UndefinedFidelityError, ZeroDivisionError)


def test_vectorize_is_row_major():
    rho = DensityMatrix(np.array([[0.6, 0.1 - 0.2j], [0.1 + 0.2j, 0.4]]))
    v = vectorize(rho)
    np.testing.assert_array_equal(v.components, [0.6, 0.1 - 0.2j, 0.1 + 0.2j, 0.4])
    assert v.trace == pytest.approx(1.0)
    assert devectorize(v) == rho


def test_liouville_vector_needs_four_entries():
    with pytest.raises(ParameterRangeError):
        LiouvilleVector(np.zeros(3))


def test_state_arrays_are_read_only():
    rho = ReferenceStates.projector("up")
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0.0


@pytest.mark.parametrize(
    "matrix",
    [
        [[0.5, 0.5], [0.0, 0.5]],  # not Hermitian
        [[1.2, 0.0], [0.0, -0.2]],  # negative eigenvalue
        [[0.8, 0.0], [0.0, 0.8]],  # trace above 1
        [[0.0, 0.0], [0.0, 0.0]],  # zero trace
    ],
)
def test_unphysical_matrices_rejected(matrix):
    with pytest.raises(ParameterRangeError):
        DensityMatrix(np.array(matrix, dtype=complex))


def test_unvalidated_wrapper_accepts_anything():
    rho = DensityMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), validate=False)
    assert rho.hermiticity_deviation == pytest.approx(1.0)


def test_reference_states():
    plus = ReferenceStates.projector("plus")
    minus = ReferenceStates.projector("minus")
    assert plus.overlap(plus) == pytest.approx(1.0)
    assert plus.overlap(minus) == pytest.approx(0.0, abs=1e-15)
    assert ReferenceStates.chiral_target(1) == plus
    assert ReferenceStates.chiral_target(-1) == minus
    with pytest.raises(ParameterRangeError):
        ReferenceStates.chiral_target(0)


def test_mixed_initial_state_is_identity_over_two():
    mixed = ReferenceStates.initial_state("mixed")
    np.testing.assert_allclose(mixed.matrix, 0.5 * np.eye(2), atol=1e-15)
    assert mixed.purity == pytest.approx(0.5)
    with pytest.raises(ParameterRangeError):
        ReferenceStates.initial_state("excited")


def test_purity_and_normalization_of_unnormalized_state():
    rho = DensityMatrix(0.25 * ReferenceStates.projector("up").matrix)
    assert rho.trace == pytest.approx(0.25)
    assert rho.purity == pytest.approx(1.0)
    assert rho.normalized().trace == pytest.approx(1.0)
    assert rho.min_eigenvalue == pytest.approx(0.0, abs=1e-15)

"""Tests for the characteristic polynomial and the Jordan-structure classifier."""

import math

import numpy as np
import pytest

from src.atlas.analytic import closed_form_char_poly
from src.core.exceptions import ParameterRangeError
from src.core.params import SystemParams
from src.liouvillian.operators import build_hybrid_liouvillian
from src.spectral.decomposition import (
    EP,
    TRIVIAL,
    classify_degeneracy,
    default_cluster_tolerance,
    eigendecompose,
)
from src.spectral.polynomial import char_poly, characteristic_residuals, poly_derivatives_at


def jordan_block(size: int, lam: float) -> np.ndarray:
    return lam * np.eye(size) + np.diag(np.ones(size - 1), 1)


def test_char_poly_of_diagonal_matrix():
    coefficients = char_poly(np.diag([1.0, 2.0, 3.0, 4.0]))
    np.testing.assert_allclose(coefficients, [1, -10, 35, -50, 24], atol=1e-12)


def test_char_poly_matches_closed_form(random_params):
    for _ in range(100):
        p = random_params()
        np.testing.assert_allclose(
            char_poly(build_hybrid_liouvillian(p)), closed_form_char_poly(p), atol=1e-9
        )


def test_char_poly_vanishes_at_eigenvalues(random_params):
    S = build_hybrid_liouvillian(random_params())
    values = np.polyval(char_poly(S), np.linalg.eigvals(S))
    assert np.max(np.abs(values)) < 1e-10 * max(1.0, np.linalg.norm(S, 2)) ** 4


def test_derivatives():
    coefficients = np.array([1.0, 0.0, 0.0, 0.0, 0.0])  # lambda^4
    assert poly_derivatives_at(coefficients, 2.0, 0) == pytest.approx(16.0)
    assert poly_derivatives_at(coefficients, 2.0, 2) == pytest.approx(48.0)
    assert poly_derivatives_at(coefficients, 2.0, 4) == pytest.approx(24.0)
    np.testing.assert_allclose(characteristic_residuals(coefficients, 0.0, 4), 0.0)
    with pytest.raises(ParameterRangeError):
        poly_derivatives_at(coefficients, 0.0, 5)


def test_single_jordan_block():
    data = eigendecompose(jordan_block(4, -1.0))
    (cluster,) = data.clusters
    assert cluster.jordan_blocks == (4,)
    assert cluster.rank_sequence == (3, 2, 1, 0)
    assert cluster.geometric_multiplicity == 1
    assert not cluster.ill_conditioned


def test_split_jordan_structure():
    S = np.zeros((4, 4))
    S[:3, :3] = jordan_block(3, 0.5)
    S[3, 3] = 0.5
    (cluster,) = eigendecompose(S).clusters
    assert cluster.jordan_blocks == (3, 1)
    assert cluster.geometric_multiplicity == 2


def test_diagonalizable_degeneracy():
    data = eigendecompose(np.diag([2.0, 2.0, 1.0, 0.0]))
    assert len(data.clusters) == 3
    (double,) = data.degenerate_clusters
    assert double.jordan_blocks == (1, 1)
    assert double.geometric_multiplicity == double.algebraic_multiplicity == 2
    assert not data.flagged


def test_invalid_tolerances():
    with pytest.raises(ParameterRangeError):
        eigendecompose(np.eye(4), cluster_tol=0.0)
    with pytest.raises(ParameterRangeError):
        eigendecompose(np.eye(4), rank_tol=-1.0)


def test_default_cluster_tolerance_scales_with_norm():
    assert default_cluster_tolerance(np.eye(4) * 0.1) == pytest.approx(1e-4)
    assert default_cluster_tolerance(np.eye(4) * 50.0) == pytest.approx(5e-3)


def test_fourth_order_point_structure(fourth_order_params):
    (record,) = classify_degeneracy(fourth_order_params)
    assert record.classification == EP
    assert record.order == 4
    assert record.jordan_blocks == (3, 1)
    assert record.label == "EP3"
    assert record.eigenvalue == pytest.approx(-1.0, abs=1e-6)
    (cluster,) = eigendecompose(build_hybrid_liouvillian(fourth_order_params)).degenerate_clusters
    assert cluster.rank_sequence == (2, 1, 0, 0)


def test_trivial_degeneracy():
    (record,) = classify_degeneracy(SystemParams.from_alpha(2.0, math.pi / 2, 0.0))
    assert record.classification == TRIVIAL
    assert record.label == "trivial"
    assert record.eigenvalue == pytest.approx(-2.0, abs=1e-8)


def test_generic_point_has_no_degeneracy():
    assert classify_degeneracy(SystemParams.from_alpha(0.7, 1.2, 0.4)) == []


def test_borderline_rank_decision_is_flagged():
    S = np.diag([0.0, 0.0, 5.0, 6.0])
    S[0, 1] = 1.0
    S[1, 0] = 1e-8
    data = eigendecompose(S, cluster_tol=1e-3)
    (cluster,) = data.degenerate_clusters
    assert cluster.ill_conditioned
    assert data.flagged

"""Characteristic polynomial of a 4x4 superoperator and its derivatives."""

import numpy as np

from src.core.exceptions import ParameterRangeError


def char_poly(S: np.ndarray) -> np.ndarray:
    """
    Coefficients of C(lambda) = det(S - lambda I), highest power first.

    Faddeev-LeVerrier recursion; for a 4x4 matrix the result is monic.
    """
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    identity = np.eye(n, dtype=complex)
    coefficients = np.zeros(n + 1, dtype=complex)
    coefficients[0] = 1.0
    M = np.zeros_like(S)
    for k in range(1, n + 1):
        M = S @ M + coefficients[k - 1] * identity
        coefficients[k] = -np.trace(S @ M) / k
    # det(S - lambda I) = (-1)^n det(lambda I - S)
    return coefficients * (-1) ** n


def poly_derivatives_at(coefficients: np.ndarray, lam: complex, k: int) -> complex:
    """k-th derivative of the polynomial at lam, 0 <= k <= degree."""
    coefficients = np.asarray(coefficients)
    degree = len(coefficients) - 1
    if not 0 <= k <= degree:
        raise ParameterRangeError("k", k, f"[0, {degree}]")
    return complex(np.polyval(np.polyder(coefficients, k), lam))


def characteristic_residuals(coefficients: np.ndarray, lam: complex, order: int) -> np.ndarray:
    """|C^(k)(lam)| for k = 0 .. order - 1."""
    return np.array([abs(poly_derivatives_at(coefficients, lam, k)) for k in range(order)])

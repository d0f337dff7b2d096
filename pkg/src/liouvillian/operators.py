"""Operators of the driven qubit with monitored spontaneous emission."""

import numpy as np

from src.core.params import SystemParams
from src.core.states import DensityMatrix

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# L = |down><up|
JUMP_OPERATOR = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
EXCITED_PROJECTOR = JUMP_OPERATOR.conj().T @ JUMP_OPERATOR


def build_hamiltonian(p: SystemParams) -> np.ndarray:
    """H = (omega_x sigma_x + omega_z sigma_z) / 2."""
    return 0.5 * (p.omega_x * SIGMA_X + p.omega_z * SIGMA_Z)


def build_nhh(p: SystemParams) -> np.ndarray:
    """Effective no-jump Hamiltonian H - i gamma/2 L^dag L."""
    return build_hamiltonian(p) - 0.5j * p.gamma * EXCITED_PROJECTOR


def liouvillian_stack(omega, theta, gamma, q) -> np.ndarray:
    """
    Hybrid Liouvillian for broadcast parameter arrays.

    Args:
        omega, theta, gamma, q: Scalars or arrays, broadcast together

    Returns:
        Complex array of shape broadcast_shape + (4, 4) acting on the
        row-major vectorization (uu, ud, du, dd)
    """
    omega, theta, gamma, q = np.broadcast_arrays(
        *(np.asarray(value, dtype=float) for value in (omega, theta, gamma, q))
    )
    wx = omega * np.sin(theta)
    wz = omega * np.cos(theta)
    half_x = 0.5j * wx

    S = np.zeros(omega.shape + (4, 4), dtype=complex)
    S[..., 0, 0] = -gamma
    S[..., 0, 1] = half_x
    S[..., 0, 2] = -half_x
    S[..., 1, 0] = half_x
    S[..., 1, 1] = -0.5 * gamma - 1j * wz
    S[..., 1, 3] = -half_x
    S[..., 2, 0] = -half_x
    S[..., 2, 2] = -0.5 * gamma + 1j * wz
    S[..., 2, 3] = half_x
    S[..., 3, 0] = gamma * q
    S[..., 3, 1] = -half_x
    S[..., 3, 2] = half_x
    return S


def build_hybrid_liouvillian(p: SystemParams) -> np.ndarray:
    return liouvillian_stack(p.omega, p.theta, p.gamma, p.q)


def apply_generator(p: SystemParams, rho: DensityMatrix) -> np.ndarray:
    """Operator form: -i[H, rho] - gamma/2 {L^dag L, rho} + q gamma L rho L^dag."""
    H = build_hamiltonian(p)
    r = rho.matrix
    return (
        -1j * (H @ r - r @ H)
        - 0.5 * p.gamma * (EXCITED_PROJECTOR @ r + r @ EXCITED_PROJECTOR)
        + p.q * p.gamma * (JUMP_OPERATOR @ r @ JUMP_OPERATOR.conj().T)
    )

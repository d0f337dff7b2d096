"""Figures of merit: chiral fidelity, postselection probability, adiabatic gaps."""

import itertools

import numpy as np
import pandas as pd

from protocols.base import BaseTrajectory
from src.constants import GAP_COLUMNS
from src.core.exceptions import UndefinedFidelityError
from src.core.states import DensityMatrix, ReferenceStates
from src.evolution.integrator import EvolutionResult
from src.liouvillian.operators import liouvillian_stack


def state_fidelity(rho: DensityMatrix, chi: int, normalized: bool = True) -> float:
    """
    Overlap of rho with the chirality target |+> (chi=+1) or |-> (chi=-1).

    Raises:
        UndefinedFidelityError: normalized fidelity of a zero-trace state
    """
    raw = rho.overlap(ReferenceStates.chiral_target(chi))
    if not normalized:
        return raw
    trace = rho.trace
    if trace <= 0:
        raise UndefinedFidelityError(f"normalized fidelity undefined for trace {trace:g}")
    return raw / trace


def fidelity(result: EvolutionResult, chi: int, normalized: bool = True) -> float:
    return state_fidelity(result.final_state, chi, normalized)


def postselection_probability(result: EvolutionResult) -> float:
    return result.probability


def eigenvalue_gaps(trajectory: BaseTrajectory, samples: int = 1001) -> pd.DataFrame:
    """Smallest pairwise eigenvalue distance of S along the path."""
    t = np.linspace(0.0, trajectory.T, samples)
    alpha, theta, q = trajectory.sample(t)
    omega = trajectory.omega
    eigenvalues = np.linalg.eigvals(liouvillian_stack(omega, theta, 2 * omega * alpha, q))
    gaps = np.min(
        [np.abs(eigenvalues[:, i] - eigenvalues[:, j])
         for i, j in itertools.combinations(range(4), 2)],
        axis=0,
    )
    return pd.DataFrame(
        {"t": t, "alpha": alpha, "theta": theta, "q": q, "min_gap": gaps}, columns=GAP_COLUMNS
    )

"""Fixed-step fourth-order Runge-Kutta propagation of the hybrid-Liouvillian equation."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from protocols.base import BaseTrajectory, Segment
from src.constants import (
    DEFAULT_STEPS_PER_UNIT_TIME,
    HISTORY_COLUMNS,
    INTEGRATION_FAULT_TOLERANCE,
    MAX_HISTORY_ROWS,
    MIN_STEPS_PER_UNIT_TIME,
    STEP_CHUNK_SIZE,
)
from src.core.exceptions import IntegrationFault, ParameterRangeError
from src.core.states import DensityMatrix, LiouvilleVector, ReferenceStates, devectorize, vectorize
from src.liouvillian.operators import liouvillian_stack
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class StepDiagnostics:
    steps: int
    segments: int
    max_local_error: float
    max_trace: float
    max_hermiticity_deviation: float
    min_eigenvalue: float


@dataclass(frozen=True)
class EvolutionResult:
    """Final unnormalized state plus the full step history."""

    final_state: DensityMatrix
    times: np.ndarray
    states: np.ndarray
    diagnostics: StepDiagnostics
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def probability(self) -> float:
        """Postselection probability P = Tr rho(T)."""
        return self.final_state.trace

    @property
    def traces(self) -> np.ndarray:
        return np.real(self.states[:, 0] + self.states[:, 3])

    def _fidelity(self, chi: int) -> float:
        target = ReferenceStates.chiral_target(chi)
        P = self.probability
        return self.final_state.overlap(target) / P if P > 0 else float("nan")

    @property
    def fidelity_plus(self) -> float:
        return self._fidelity(1)

    @property
    def fidelity_minus(self) -> float:
        return self._fidelity(-1)

    def history_frame(self, max_rows: int = MAX_HISTORY_ROWS) -> pd.DataFrame:
        """Trace history decimated to at most ``max_rows`` rows, final step included."""
        n = len(self.times)
        index = np.unique(np.linspace(0, n - 1, min(n, max_rows)).round().astype(int))
        states = self.states[index]
        return pd.DataFrame(
            {
                "t": self.times[index],
                "trace": np.real(states[:, 0] + states[:, 3]),
                "rho_uu": np.real(states[:, 0]),
                "re_rho_ud": np.real(states[:, 1]),
                "im_rho_ud": np.imag(states[:, 1]),
                "rho_dd": np.real(states[:, 3]),
            },
            columns=HISTORY_COLUMNS,
        )


def _generators(segment: Segment, times: np.ndarray, omega: float) -> np.ndarray:
    alpha, theta, q = segment.controls(times)
    return liouvillian_stack(omega, theta, 2.0 * omega * alpha, q)


def _rk4_propagators(A0: np.ndarray, Am: np.ndarray, A1: np.ndarray, h: float) -> np.ndarray:
    """
    One classical RK4 step of v' = A(t) v as a matrix, for a stack of steps.

    A0, Am, A1 are the generators at t, t + h/2 and t + h.
    """
    identity = np.eye(4, dtype=complex)
    K1 = A0
    K2 = Am @ (identity + 0.5 * h * K1)
    K3 = Am @ (identity + 0.5 * h * K2)
    K4 = A1 @ (identity + h * K3)
    return identity + (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4)


def _hermitian_min_eigenvalue(states: np.ndarray) -> np.ndarray:
    uu, ud, du, dd = (states[:, k] for k in range(4))
    mean = 0.5 * np.real(uu + dd)
    off = 0.5 * (ud + np.conj(du))
    radius = np.sqrt((0.5 * np.real(uu - dd)) ** 2 + np.abs(off) ** 2)
    return mean - radius


def integrate(
    trajectory: BaseTrajectory,
    rho_i: Optional[DensityMatrix] = None,
    steps_per_unit_time: int = DEFAULT_STEPS_PER_UNIT_TIME,
    fault_tol: float = INTEGRATION_FAULT_TOLERANCE,
) -> EvolutionResult:
    """
    Propagate an initial state along a trajectory.

    Each smooth segment is split into ceil(duration * steps_per_unit_time)
    equal steps, so no step straddles a hop time.

    Args:
        trajectory: Control trajectory (omega taken from it)
        rho_i: Initial state, maximally mixed by default
        steps_per_unit_time: Step density, at least 100
        fault_tol: Allowed excess trace and Hermiticity deviation

    Returns:
        EvolutionResult with the unnormalized final state

    Raises:
        IntegrationFault: trace above 1 or Hermiticity lost beyond fault_tol
    """
    if steps_per_unit_time < MIN_STEPS_PER_UNIT_TIME:
        raise ParameterRangeError(
            "steps_per_unit_time", steps_per_unit_time, f"[{MIN_STEPS_PER_UNIT_TIME}, inf)"
        )
    rho_i = rho_i if rho_i is not None else ReferenceStates.initial_state("mixed")
    omega = trajectory.omega
    segments = trajectory.segments()

    v = np.array(vectorize(rho_i).components)
    times = [np.array([0.0])]
    history = [v[np.newaxis, :].copy()]
    max_local_error = 0.0

    for number, segment in enumerate(segments, start=1):
        n = max(1, math.ceil(segment.duration * steps_per_unit_time - 1e-9))
        h = segment.duration / n
        logger.debug(
            f"Segment {number}/{len(segments)}: [{segment.start:g}, {segment.stop:g}], {n} steps"
        )
        grid = segment.start + h * np.arange(n + 1)
        grid[-1] = segment.stop
        states = np.empty((n, 4), dtype=complex)

        for first in range(0, n, STEP_CHUNK_SIZE):
            last = min(first + STEP_CHUNK_SIZE, n)
            t0 = grid[first:last]
            A0 = _generators(segment, t0, omega)
            Am = _generators(segment, t0 + 0.5 * h, omega)
            A1 = _generators(segment, grid[first + 1:last + 1], omega)
            norms = np.linalg.norm(Am, ord=2, axis=(-2, -1))
            max_local_error = max(max_local_error, float(np.max((h * norms) ** 5 / 120.0)))

            propagators = _rk4_propagators(A0, Am, A1, h)
            for j in range(last - first):
                v = propagators[j] @ v
                states[first + j] = v

        times.append(grid[1:])
        history.append(states)

    times = np.concatenate(times)
    states = np.concatenate(history)

    traces = np.real(states[:, 0] + states[:, 3])
    hermiticity = np.maximum(
        np.abs(states[:, 1] - np.conj(states[:, 2])),
        np.maximum(np.abs(np.imag(states[:, 0])), np.abs(np.imag(states[:, 3]))),
    )
    min_eigenvalues = _hermitian_min_eigenvalue(states)
    diagnostics = StepDiagnostics(
        steps=len(times) - 1,
        segments=len(segments),
        max_local_error=max_local_error,
        max_trace=float(np.max(traces)),
        max_hermiticity_deviation=float(np.max(hermiticity)),
        min_eigenvalue=float(np.min(min_eigenvalues)),
    )

    if not np.all(np.isfinite(states)):
        raise IntegrationFault("non-finite state", {"kind": trajectory.kind, "q0": trajectory.q0})
    if diagnostics.max_trace > 1.0 + fault_tol:
        worst = int(np.argmax(traces))
        raise IntegrationFault(
            "trace exceeded 1",
            {"t": float(times[worst]), "trace": diagnostics.max_trace,
             "kind": trajectory.kind, "q0": trajectory.q0},
        )
    if diagnostics.max_hermiticity_deviation > fault_tol:
        worst = int(np.argmax(hermiticity))
        raise IntegrationFault(
            "Hermiticity lost",
            {"t": float(times[worst]), "deviation": diagnostics.max_hermiticity_deviation,
             "kind": trajectory.kind, "q0": trajectory.q0},
        )

    final_state = devectorize(LiouvilleVector(states[-1]))
    logger.info(
        f"Integrated {trajectory.kind} (q0={trajectory.q0:g}, chi={trajectory.chi:+d}, "
        f"T={trajectory.T:g}) in {diagnostics.steps} steps; P={final_state.trace:.6g}"
    )
    return EvolutionResult(
        final_state=final_state,
        times=times,
        states=states,
        diagnostics=diagnostics,
        metadata=trajectory.describe(),
    )

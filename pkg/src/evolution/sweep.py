"""Parameter sweeps of the conversion protocols."""

from multiprocessing import Pool
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from src.constants import DEFAULT_STEPS_PER_UNIT_TIME, SWEEP_COLUMNS
from src.core.exceptions import ParameterRangeError, SweepPointError
from src.core.states import ReferenceStates
from src.evolution.integrator import integrate
from src.evolution.metrics import state_fidelity
from src.evolution.trajectories import build_trajectory
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _evaluate_point(task: Dict[str, Any]) -> Dict[str, Any]:
    """Run one sweep point; module-level so worker processes can unpickle it."""
    kind, name, value = task["kind"], task["parameter"], task["value"]
    params = {**task["params"], name: value, "chi": task["chi"]}
    row = {"kind": kind, "q0": np.nan, "chi": task["chi"], "T": np.nan,
           "F_normalized": np.nan, "F_raw": np.nan, "P": np.nan}
    if name not in SWEEP_COLUMNS:
        row[name] = value
    try:
        trajectory = build_trajectory(kind, **params)
        row["q0"], row["T"] = trajectory.q0, trajectory.T
        result = integrate(
            trajectory,
            ReferenceStates.initial_state(task["initial"]),
            steps_per_unit_time=task["steps_per_unit_time"],
        )
        row["P"] = result.probability
        row["F_raw"] = state_fidelity(result.final_state, task["chi"], normalized=False)
        row["F_normalized"] = state_fidelity(result.final_state, task["chi"])
    except ArithmeticError as e:
        if not task["record_errors"]:
            raise SweepPointError(name, value, e) from e
        logger.warning(f"{kind} point {name}={value:g} failed: {e}")
        row["error"] = str(e)
    return row


def sweep_parameter(
    kind: str,
    parameter: str,
    values: Iterable[float],
    chi: int,
    params: Optional[Dict[str, Any]] = None,
    initial: str = "mixed",
    steps_per_unit_time: int = DEFAULT_STEPS_PER_UNIT_TIME,
    workers: int = 1,
    record_errors: bool = False,
) -> pd.DataFrame:
    """
    Evaluate F and P of one protocol family over values of one parameter.

    Args:
        kind: Protocol kind (tilted, flat, hopping)
        parameter: ProtocolParameters field to sweep
        values: Grid values, kept in order
        chi: Chirality +1 / -1
        params: Fixed overrides for the other protocol parameters
        initial: Initial state name
        workers: Processes for the point-parallel run (1 = sequential)
        record_errors: Store failing points as rows with an ``error`` column

    Returns:
        DataFrame with one row per grid value

    Raises:
        SweepPointError: a point failed and record_errors is False
    """
    tasks: List[Dict[str, Any]] = [
        {
            "kind": kind,
            "parameter": parameter,
            "value": float(value),
            "chi": chi,
            "params": dict(params or {}),
            "initial": initial,
            "steps_per_unit_time": steps_per_unit_time,
            "record_errors": record_errors,
        }
        for value in values
    ]
    logger.info(f"Sweeping {kind} over {len(tasks)} values of {parameter} (chi={chi:+d})")

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            rows = pool.map(_evaluate_point, tasks)
    else:
        rows = [_evaluate_point(task) for task in tasks]

    columns = list(SWEEP_COLUMNS)
    if parameter not in SWEEP_COLUMNS:
        columns.append(parameter)
    if any("error" in row for row in rows):
        columns.append("error")
    return pd.DataFrame(rows, columns=columns)


def sweep_q0(
    kind: str,
    q0_grid: Iterable[float],
    chi: int,
    params: Optional[Dict[str, Any]] = None,
    **options: Any,
) -> pd.DataFrame:
    """F(q0) and P(q0) for one protocol family; see :func:`sweep_parameter`."""
    q0_grid = [float(q0) for q0 in q0_grid]
    outside = [q0 for q0 in q0_grid if not 0.0 <= q0 <= 1.0]
    if outside:
        raise ParameterRangeError("q0", outside[0], "[0, 1]")
    return sweep_parameter(kind, "q0", q0_grid, chi, params, **options)


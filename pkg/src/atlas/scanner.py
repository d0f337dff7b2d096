"""Numerical search for degeneracies by damped Newton on C = C' = ... = 0."""

import itertools
import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import List, Optional, Tuple

import numpy as np

from src.atlas.analytic import distance_to_branches
from src.config.models import ScanGridConfig, ToleranceConfig
from src.constants import (
    FINITE_DIFFERENCE_STEP,
    NEWTON_DAMPING,
    NEWTON_MAX_HALVINGS,
    NEWTON_MAX_ITERATIONS,
    NEWTON_NOISE_FLOOR,
    NEWTON_RESIDUAL_TOLERANCE,
    NEWTON_STEP_TOLERANCE,
    SNAP_TOLERANCE,
)
from src.core.exceptions import ParameterRangeError
from src.core.params import SystemParams
from src.liouvillian.operators import liouvillian_stack
from src.spectral.decomposition import DegeneracyRecord, classify_degeneracy
from src.spectral.polynomial import char_poly
from src.utils.logger import get_logger

logger = get_logger(__name__)

# parameters solved for, per target order; the rest stay at grid values
FREE_PARAMETERS = {2: ("q",), 3: ("theta", "q"), 4: ("alpha", "theta", "q")}
PARAMETER_INDEX = {"alpha": 0, "theta": 1, "q": 2}


@dataclass
class ScanResult:
    """Deduplicated solutions of one scan plus bookkeeping."""

    target_order: int
    records: List[DegeneracyRecord] = field(default_factory=list)
    cells: int = 0
    converged: int = 0
    skipped: int = 0
    rejected: int = 0

    @property
    def summary(self) -> dict:
        return {
            "target_order": self.target_order,
            "cells": self.cells,
            "converged": self.converged,
            "skipped": self.skipped,
            "rejected": self.rejected,
            "solutions": len(self.records),
        }


def _coefficients(params: np.ndarray) -> np.ndarray:
    alpha, theta, q = params
    S = liouvillian_stack(1.0, theta, 2.0 * alpha, q)
    return np.real(char_poly(S))


def _residual(lam: float, params: np.ndarray, order: int) -> np.ndarray:
    coefficients = _coefficients(params)
    return np.array([np.polyval(np.polyder(coefficients, k), lam) for k in range(order)])


def _jacobian(lam: float, params: np.ndarray, order: int, free: Tuple[int, ...]) -> np.ndarray:
    coefficients = _coefficients(params)
    J = np.zeros((order, 1 + len(free)))
    for k in range(order):
        J[k, 0] = np.polyval(np.polyder(coefficients, k + 1), lam)
    for column, index in enumerate(free, start=1):
        h = FINITE_DIFFERENCE_STEP * max(1.0, abs(params[index]))
        up, down = params.copy(), params.copy()
        up[index] += h
        down[index] -= h
        derivative = (_coefficients(up) - _coefficients(down)) / (2 * h)
        for k in range(order):
            J[k, column] = np.polyval(np.polyder(derivative, k), lam)
    return J


def _scale(lam: float, params: np.ndarray) -> float:
    coefficients = np.abs(_coefficients(params))
    powers = np.abs(lam) ** np.arange(len(coefficients) - 1, -1, -1)
    return max(1.0, float(np.sum(coefficients * powers)))


def newton_solve(
    lam: float,
    params: np.ndarray,
    order: int,
    max_iterations: int = NEWTON_MAX_ITERATIONS,
    tolerance: float = NEWTON_RESIDUAL_TOLERANCE,
) -> Optional[Tuple[float, np.ndarray]]:
    """
    Damped Newton iteration for an order-n root coalescence.

    Args:
        lam: Eigenvalue seed (real; the characteristic polynomial has real coefficients)
        params: Seed (alpha, theta, q)
        order: Target order n; n - 1 parameters are free

    Returns:
        (lambda, params) on convergence, None otherwise
    """
    free = tuple(PARAMETER_INDEX[name] for name in FREE_PARAMETERS[order])
    params = np.array(params, dtype=float)
    x = np.concatenate([[lam], params[list(free)]])

    def unpack(vector):
        full = params.copy()
        full[list(free)] = vector[1:]
        return vector[0], full

    current = _residual(*unpack(x), order)
    for _ in range(max_iterations):
        lam_k, params_k = unpack(x)
        J = _jacobian(lam_k, params_k, order, free)
        step = np.linalg.lstsq(J, -current, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return None

        floor = NEWTON_NOISE_FLOOR * _scale(lam_k, params_k)
        target = max(np.linalg.norm(current), floor)
        t = 1.0
        for _ in range(NEWTON_MAX_HALVINGS):
            candidate = x + t * step
            trial = _residual(*unpack(candidate), order)
            if np.linalg.norm(trial) <= target:
                break
            t *= NEWTON_DAMPING
        else:
            break
        x, current = candidate, trial
        if np.linalg.norm(t * step) <= NEWTON_STEP_TOLERANCE * (1.0 + np.linalg.norm(x)):
            break

    lam_k, params_k = unpack(x)
    if np.linalg.norm(current) > tolerance * _scale(lam_k, params_k):
        return None
    return float(lam_k), params_k


def _in_range(params: np.ndarray, slack: float = SNAP_TOLERANCE) -> bool:
    alpha, theta, q = params
    return alpha >= -slack and -slack <= theta <= math.pi + slack and -slack <= q <= 1 + slack


def _snap(params: np.ndarray, tol: float = SNAP_TOLERANCE) -> np.ndarray:
    """
    Project onto the q bounds and the mirror plane theta = pi/2.

    Newton converges only linearly onto solutions lying in these sets
    (the system is singular there), leaving errors of order sqrt(eps).
    """
    alpha, theta, q = params
    alpha = max(alpha, 0.0)
    theta = min(max(theta, 0.0), math.pi)
    q = min(max(q, 0.0), 1.0)
    if abs(theta - math.pi / 2) <= tol:
        theta = math.pi / 2
    if q <= tol:
        q = 0.0
    elif q >= 1.0 - tol:
        q = 1.0
    return np.array([alpha, theta, q])


def _solve_cell(task):
    """Worker: seed from the closest eigenvalue pair and run Newton."""
    cell, order = task
    params = np.array(cell, dtype=float)
    values = np.linalg.eigvals(liouvillian_stack(1.0, params[1], 2 * params[0], params[2]))
    pairs = itertools.combinations(values, 2)
    seed = min(pairs, key=lambda pair: abs(pair[0] - pair[1]))
    lam = float(np.real(0.5 * (seed[0] + seed[1])))
    return newton_solve(lam, params, order)


def _grid_cells(grid: ScanGridConfig) -> List[Tuple[float, float, float]]:
    return [
        (float(a), float(t), float(q))
        for a in grid.alpha.values()
        for t in grid.theta.values()
        for q in grid.q.values()
    ]


def scan_numeric(
    grid: ScanGridConfig,
    target_order: int,
    tolerances: Optional[ToleranceConfig] = None,
    workers: int = 1,
) -> ScanResult:
    """
    Locate degeneracies of the requested order on a parameter grid.

    Every grid cell seeds one Newton solve; converged solutions inside the
    physical range are classified with the spectral module and deduplicated.

    Args:
        grid: Seed grid over (alpha, theta, q), omega = 1
        target_order: 2, 3 or 4
        tolerances: Cluster/rank/dedup settings
        workers: Process count for the cell-parallel phase

    Returns:
        ScanResult with records sorted by (alpha, theta, q)
    """
    if target_order not in FREE_PARAMETERS:
        raise ParameterRangeError("target_order", target_order, "{2, 3, 4}")
    tolerances = tolerances or ToleranceConfig()

    cells = _grid_cells(grid)
    result = ScanResult(target_order=target_order, cells=len(cells))
    logger.info(f"Scanning {len(cells)} cells for order-{target_order} degeneracies")

    tasks = [(cell, target_order) for cell in cells]
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            solutions = pool.map(_solve_cell, tasks)
    else:
        solutions = [_solve_cell(task) for task in tasks]

    accepted: List[Tuple[float, np.ndarray]] = []
    for cell, solution in zip(cells, solutions):
        if solution is None:
            result.skipped += 1
            logger.debug(f"No convergence from seed {cell}")
            continue
        result.converged += 1
        lam, params = solution
        if not _in_range(params):
            result.rejected += 1
            continue
        params = _snap(params)
        if any(np.linalg.norm(params - kept) <= tolerances.dedup_radius for _, kept in accepted):
            continue
        accepted.append((lam, params))

    accepted.sort(key=lambda item: tuple(item[1]))
    for lam, params in accepted:
        p = SystemParams.from_alpha(*params)
        records = classify_degeneracy(p, tolerances.cluster_tol, tolerances.rank_tol)
        if not records:
            logger.warning(f"Solution at {tuple(params)} not resolved as degenerate")
            result.rejected += 1
            continue
        result.records.append(min(records, key=lambda r: abs(r.eigenvalue - lam)))

    if result.skipped:
        logger.warning(f"{result.skipped} of {result.cells} cells did not converge")
    logger.info(f"Found {len(result.records)} distinct order-{target_order} solutions")
    return result


def match_to_branches(records: List[DegeneracyRecord]) -> List[Tuple[str, float]]:
    """Nearest analytic branch name and parameter-space distance for each record."""
    matches = []
    for record in records:
        alpha, theta, q = record.params.controls
        branch, distance = distance_to_branches(alpha, theta, q)
        matches.append((branch.value if branch else "unmatched", distance))
    return matches

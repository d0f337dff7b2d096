"""Cross-check of the closed-form atlas against the spectral classifier."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.atlas.analytic import BRANCH_ORDER, AtlasBranch, AtlasPoint, sample_branches
from src.constants import ATLAS_COLUMNS, RANK_TOLERANCE
from src.core.exceptions import ParameterRangeError
from src.liouvillian.operators import build_hybrid_liouvillian
from src.spectral.decomposition import DegeneracyRecord, classify_degeneracy
from src.spectral.polynomial import char_poly, characteristic_residuals
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class BranchCheck:
    branch: AtlasBranch
    samples: int = 0
    agreements: int = 0
    flagged: int = 0
    max_residual: float = 0.0
    max_eigenvalue_deviation: float = 0.0

    @property
    def all_agree(self) -> bool:
        return self.samples == self.agreements


@dataclass
class AtlasValidationReport:
    checks: Dict[AtlasBranch, BranchCheck] = field(default_factory=dict)
    rows: List[dict] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((c.max_residual for c in self.checks.values()), default=0.0)

    @property
    def max_eigenvalue_deviation(self) -> float:
        return max((c.max_eigenvalue_deviation for c in self.checks.values()), default=0.0)

    @property
    def passed(self) -> bool:
        return all(check.all_agree for check in self.checks.values())

    def frame(self) -> pd.DataFrame:
        """Classified samples in the atlas export layout."""
        return pd.DataFrame(self.rows, columns=ATLAS_COLUMNS)


def _nearest(records: List[DegeneracyRecord], point: AtlasPoint) -> Optional[DegeneracyRecord]:
    if not records:
        return None
    if point.eigenvalue is None:
        return max(records, key=lambda r: r.order)
    return min(records, key=lambda r: abs(r.eigenvalue - point.eigenvalue))


def validate_atlas(
    sample_count: int,
    cluster_tol: Optional[float] = None,
    rank_tol: float = RANK_TOLERANCE,
    builder=build_hybrid_liouvillian,
) -> AtlasValidationReport:
    """
    Classify analytic branch samples and compare with the stated EP orders.

    Residuals are |C^(k)(lambda)| / max(1, ||S||)^(4-k) for k below the
    expected order, at the numerically found degenerate eigenvalue.

    Args:
        sample_count: Samples per branch family

    Returns:
        AtlasValidationReport
    """
    if sample_count < 1:
        raise ParameterRangeError("sample_count", sample_count, "[1, inf)")

    report = AtlasValidationReport()
    for point in sample_branches(sample_count):
        p = point.to_params()
        S = builder(p)
        order, label = BRANCH_ORDER[point.branch]
        check = report.checks.setdefault(point.branch, BranchCheck(point.branch))
        check.samples += 1

        record = _nearest(classify_degeneracy(p, cluster_tol, rank_tol, builder=builder), point)
        if record is None:
            logger.warning(
                f"No degeneracy found at {point.branch.value} sample {point.coordinates}"
            )
            report.rows.append(
                {"branch": point.branch.value, "alpha": point.alpha, "theta": point.theta,
                 "q": point.q, "re_lambda": np.nan, "im_lambda": np.nan, "order": 1,
                 "classification": "none"}
            )
            continue

        scale = max(1.0, float(np.linalg.norm(S, 2)))
        residuals = characteristic_residuals(char_poly(S), record.eigenvalue, order)
        normalized = residuals / scale ** (4 - np.arange(order))
        check.max_residual = max(check.max_residual, float(np.max(normalized)))
        if point.eigenvalue is not None:
            check.max_eigenvalue_deviation = max(
                check.max_eigenvalue_deviation, abs(record.eigenvalue - point.eigenvalue)
            )
        check.flagged += int(record.flagged)
        if record.order == order and record.label == label:
            check.agreements += 1
        else:
            logger.warning(
                f"{point.branch.value} sample {point.coordinates}: expected {label} (order "
                f"{order}), got {record.label} (order {record.order})"
            )
        report.rows.append(
            {"branch": point.branch.value, "alpha": point.alpha, "theta": point.theta,
             "q": point.q, "re_lambda": record.eigenvalue.real,
             "im_lambda": record.eigenvalue.imag, "order": record.order,
             "classification": record.label}
        )

    for check in report.checks.values():
        logger.info(
            f"{check.branch.value}: {check.agreements}/{check.samples} agree, "
            f"max residual {check.max_residual:.3g}"
        )
    return report

"""
Closed-form manifold of degeneracies of the hybrid Liouvillian (omega = 1 units).

With mu = lambda + gamma/2 the characteristic polynomial is the depressed quartic

    mu^4 + (omega^2 - gamma^2/4) mu^2 - (gamma q omega_x^2 / 2) mu - gamma^2 omega_z^2 / 4,

which depends on theta only through cos^2(theta). Every formula below follows
from requiring a triple, a double or a quadruple root of it.
"""

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from src.constants import ATLAS_COLUMNS, DOMAIN_SLACK, THIRD_ORDER_ALPHA_RANGE
from src.core.exceptions import AtlasDomainError
from src.core.params import SystemParams


class AtlasBranch(str, Enum):
    THIRD_ORDER_LINE_1 = "third-order-line-1"
    THIRD_ORDER_LINE_2 = "third-order-line-2"
    SURFACE_Q1 = "surface-q1"
    SURFACE_Q2 = "surface-q2"
    FOURTH_ORDER_POINT = "fourth-order-point"
    TRIVIAL_LINE = "trivial-line"


# algebraic order and classification label stated for each branch
BRANCH_ORDER = {
    AtlasBranch.THIRD_ORDER_LINE_1: (3, "EP3"),
    AtlasBranch.THIRD_ORDER_LINE_2: (3, "EP3"),
    AtlasBranch.SURFACE_Q1: (2, "EP2"),
    AtlasBranch.SURFACE_Q2: (2, "EP2"),
    AtlasBranch.FOURTH_ORDER_POINT: (4, "EP3"),
    AtlasBranch.TRIVIAL_LINE: (2, "trivial"),
}


class AtlasPoint(BaseModel):
    """Analytic degeneracy sample; q is NaN when the branch is not defined there."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    theta: float
    q: float
    branch: AtlasBranch
    valid: bool
    eigenvalue: Optional[float] = None

    def to_params(self, omega: float = 1.0) -> SystemParams:
        q = min(max(self.q, 0.0), 1.0)
        return SystemParams.from_alpha(self.alpha, self.theta, q, omega=omega)

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([self.alpha, self.theta, self.q])


def _is_valid(alpha: float, theta: float, q: float) -> bool:
    return (
        alpha >= 0
        and 0.0 <= theta <= math.pi
        and math.isfinite(q)
        and -DOMAIN_SLACK <= q <= 1.0 + DOMAIN_SLACK
    )


def closed_form_char_poly(p: SystemParams) -> np.ndarray:
    """Coefficients of det(S - lambda I), highest power first, from the depressed quartic."""
    a = 0.5 * p.gamma
    quadratic = p.omega**2 - a**2
    linear = -0.5 * p.gamma * p.q * p.omega_x**2
    constant = -(a**2) * p.omega_z**2
    return np.array(
        [
            1.0,
            4 * a,
            6 * a**2 + quadratic,
            4 * a**3 + 2 * quadratic * a + linear,
            a**4 + quadratic * a**2 + linear * a + constant,
        ],
        dtype=complex,
    )


def fourth_order_point() -> AtlasPoint:
    return AtlasPoint(
        alpha=1.0,
        theta=math.pi / 2,
        q=0.0,
        branch=AtlasBranch.FOURTH_ORDER_POINT,
        valid=True,
        eigenvalue=-1.0,
    )


def _check_line_domain(alpha: float) -> float:
    low, high = THIRD_ORDER_ALPHA_RANGE
    if not low - DOMAIN_SLACK <= alpha <= high + DOMAIN_SLACK:
        raise AtlasDomainError(
            "alpha", alpha, "[1, sqrt(3)]", "third-order lines need 0 <= q <= 1"
        )
    return min(max(alpha, low), high)


def theta1(alpha: float) -> float:
    alpha = _check_line_domain(alpha)
    a2 = alpha**2
    argument = (a2**2 - 8 * a2 + 1) / (6 * a2)
    return 0.5 * math.acos(min(1.0, max(-1.0, argument)))


def q1_line(alpha: float) -> float:
    alpha = _check_line_domain(alpha)
    a2 = alpha**2
    return -8 * math.sqrt(6) * alpha * (a2 - 1) ** 1.5 / (3 * (a2**2 - 14 * a2 + 1))


def third_order_eigenvalue(alpha: float) -> float:
    """Degenerate eigenvalue shared by both third-order lines."""
    return -alpha - math.sqrt(max(alpha**2 - 1, 0.0) / 6)


def third_order_line(alpha: float) -> Tuple[AtlasPoint, AtlasPoint]:
    """
    The two mirror-symmetric lines of third-order EPs at a given alpha.

    Raises:
        AtlasDomainError: alpha outside [1, sqrt(3)]
    """
    t1 = theta1(alpha)
    q = q1_line(alpha)
    lam = third_order_eigenvalue(alpha)
    return (
        AtlasPoint(alpha=alpha, theta=t1, q=q, branch=AtlasBranch.THIRD_ORDER_LINE_1,
                   valid=_is_valid(alpha, t1, q), eigenvalue=lam),
        AtlasPoint(alpha=alpha, theta=math.pi - t1, q=q,
                   branch=AtlasBranch.THIRD_ORDER_LINE_2,
                   valid=_is_valid(alpha, math.pi - t1, q), eigenvalue=lam),
    )


def eta(alpha: float, theta: float) -> Optional[float]:
    """
    alpha^2 - 1 + sqrt((alpha^2 - 1)^2 - 12 alpha^2 cos^2 theta).

    None where the root is imaginary.
    """
    a2 = alpha**2
    radicand = (a2 - 1) ** 2 - 12 * a2 * math.cos(theta) ** 2
    if radicand < 0:
        if radicand > -DOMAIN_SLACK * max(1.0, (a2 - 1) ** 2):
            radicand = 0.0
        else:
            return None
    return a2 - 1 + math.sqrt(radicand)


def second_order_surfaces(alpha: float, theta: float) -> Tuple[AtlasPoint, AtlasPoint]:
    """
    Points of the q1 and q2 surfaces above (alpha, theta).

    Branches that are absent (imaginary roots, sin(theta) = 0, q outside
    [0, 1]) come back with valid=False; q is NaN when not computable.
    """
    nan = float("nan")
    value = eta(alpha, theta)
    sin2 = math.sin(theta) ** 2
    if value is None or sin2 == 0.0 or alpha == 0.0:
        return (
            AtlasPoint(alpha=alpha, theta=theta, q=nan, branch=AtlasBranch.SURFACE_Q1, valid=False),
            AtlasPoint(alpha=alpha, theta=theta, q=nan, branch=AtlasBranch.SURFACE_Q2, valid=False),
        )

    a2m1 = alpha**2 - 1
    denominator = 3 * alpha * sin2
    complement = 2 * a2m1 - value
    if a2m1 > 0:
        # cancellation-free form of 2(alpha^2 - 1) - eta
        complement = 12 * alpha**2 * math.cos(theta) ** 2 / value
    points = []
    for branch, square in (
        (AtlasBranch.SURFACE_Q1, value),
        (AtlasBranch.SURFACE_Q2, complement),
    ):
        if -DOMAIN_SLACK < square < 0:
            square = 0.0
        if square < 0 or (a2m1 < 0 and square <= DOMAIN_SLACK):
            points.append(AtlasPoint(alpha=alpha, theta=theta, q=nan, branch=branch, valid=False))
            continue
        if branch is AtlasBranch.SURFACE_Q1:
            q = math.sqrt(2 * square) * (3 * a2m1 - square) / (math.sqrt(3) * denominator)
        else:
            q = math.sqrt(2 / 3) * math.sqrt(square) * (a2m1 + value) / denominator
        points.append(
            AtlasPoint(alpha=alpha, theta=theta, q=q, branch=branch,
                       valid=_is_valid(alpha, theta, q),
                       eigenvalue=-alpha - math.sqrt(square / 6))
        )
    return points[0], points[1]


def trivial_line(alpha: float) -> AtlasPoint:
    if alpha <= 1.0:
        raise AtlasDomainError("alpha", alpha, "(1, inf)", "trivial degeneracy line")
    return AtlasPoint(alpha=alpha, theta=math.pi / 2, q=0.0, branch=AtlasBranch.TRIVIAL_LINE,
                      valid=True, eigenvalue=-alpha)


def sample_branches(
    count: int, alpha_max: float = 3.0, margin: float = 0.05, line_endpoints: bool = False
) -> List[AtlasPoint]:
    """
    Deterministic samples of every branch, ``count`` per branch family.

    With ``line_endpoints`` the third-order lines include alpha = 1 (where they
    meet the fourth-order point) and alpha = sqrt(3) (q = 1).

    Surface samples keep a distance ``margin`` from the third-order lines
    (radicand) and from theta = pi/2, where q2 meets the trivial line.
    """
    if count <= 0:
        return []
    low, high = THIRD_ORDER_ALPHA_RANGE
    points: List[AtlasPoint] = [fourth_order_point()]

    if line_endpoints:
        alphas = np.linspace(low, high, count)
    else:
        alphas = np.linspace(low, high, count + 2)[1:-1]
    for alpha in alphas:
        points.extend(third_order_line(float(alpha)))

    for branch in (AtlasBranch.SURFACE_Q1, AtlasBranch.SURFACE_Q2):
        candidates = []
        side = max(4, int(math.ceil(math.sqrt(count))) * 4)
        for alpha in np.linspace(1.0 + margin, alpha_max, side):
            for theta in np.linspace(margin, math.pi - margin, side):
                if abs(theta - math.pi / 2) < margin:
                    continue
                a2 = alpha**2
                if (a2 - 1) ** 2 - 12 * a2 * math.cos(theta) ** 2 < margin:
                    continue
                q1, q2 = second_order_surfaces(float(alpha), float(theta))
                point = q1 if branch is AtlasBranch.SURFACE_Q1 else q2
                if point.valid and margin <= point.q:
                    candidates.append(point)
        if candidates:
            picks = np.linspace(0, len(candidates) - 1, min(count, len(candidates)))
            points.extend(candidates[int(round(i))] for i in picks)

    for alpha in np.linspace(1.0 + margin, alpha_max, count):
        points.append(trivial_line(float(alpha)))
    return points


def distance_to_branches(
    alpha: float, theta: float, q: float
) -> Tuple[Optional[AtlasBranch], float]:
    """Nearest analytic branch to a numerically located point and the distance to it."""
    target = np.array([alpha, theta, q])
    candidates = [fourth_order_point()]
    low, high = THIRD_ORDER_ALPHA_RANGE
    if low <= alpha <= high:
        candidates.extend(third_order_line(alpha))
    candidates.extend(second_order_surfaces(alpha, theta))
    if alpha > 1.0:
        candidates.append(trivial_line(alpha))

    best, best_distance = None, math.inf
    for point in candidates:
        if not point.valid:
            continue
        d = float(np.linalg.norm(point.coordinates - target))
        if d < best_distance:
            best, best_distance = point.branch, d
    return best, best_distance


def atlas_frame(points: List[AtlasPoint], records: Sequence = ()) -> pd.DataFrame:
    """
    Analytic samples and numeric scan records in the atlas export layout.

    Numeric rows carry branch ``numeric:<nearest analytic branch>``.
    """
    rows = []
    for point in points:
        order, label = BRANCH_ORDER[point.branch]
        eigenvalue = point.eigenvalue if point.eigenvalue is not None else float("nan")
        rows.append(
            {
                "branch": point.branch.value,
                "alpha": point.alpha,
                "theta": point.theta,
                "q": point.q,
                "re_lambda": eigenvalue,
                "im_lambda": 0.0,
                "order": order,
                "classification": label,
            }
        )
    for record in records:
        alpha, theta, q = record.params.controls
        branch, _ = distance_to_branches(alpha, theta, q)
        rows.append(
            {
                "branch": f"numeric:{branch.value if branch else 'unmatched'}",
                "alpha": alpha,
                "theta": theta,
                "q": q,
                "re_lambda": record.eigenvalue.real,
                "im_lambda": record.eigenvalue.imag,
                "order": record.order,
                "classification": record.label,
            }
        )
    return pd.DataFrame(rows, columns=ATLAS_COLUMNS)

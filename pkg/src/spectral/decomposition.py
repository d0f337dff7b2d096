"""Eigen-decomposition with Jordan structure recovered from ranks of powers."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import svdvals

from src.constants import CLUSTER_TOLERANCE, ILL_CONDITIONED_FACTOR, RANK_TOLERANCE
from src.core.exceptions import ParameterRangeError
from src.core.params import SystemParams
from src.core.states import LiouvilleVector
from src.liouvillian.operators import build_hybrid_liouvillian
from src.utils.logger import get_logger

logger = get_logger(__name__)

EP = "EP"
TRIVIAL = "trivial"
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class EigenCluster:
    """Group of numerically coincident eigenvalues."""

    eigenvalue: complex
    members: Tuple[int, ...]
    geometric_multiplicity: int
    jordan_blocks: Tuple[int, ...]
    rank_sequence: Tuple[int, ...]
    ill_conditioned: bool

    @property
    def algebraic_multiplicity(self) -> int:
        return len(self.members)

    @property
    def largest_block(self) -> int:
        return max(self.jordan_blocks)


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: Tuple[LiouvilleVector, ...]
    clusters: Tuple[EigenCluster, ...]

    @property
    def flagged(self) -> bool:
        return any(cluster.ill_conditioned for cluster in self.clusters)

    @property
    def degenerate_clusters(self) -> Tuple[EigenCluster, ...]:
        return tuple(c for c in self.clusters if c.algebraic_multiplicity > 1)


@dataclass(frozen=True)
class DegeneracyRecord:
    params: SystemParams
    eigenvalue: complex
    order: int  # algebraic multiplicity
    geometric_multiplicity: int
    jordan_blocks: Tuple[int, ...]
    classification: str
    flagged: bool = False

    @property
    def largest_block(self) -> int:
        return max(self.jordan_blocks)

    @property
    def ep_order(self) -> int:
        return self.largest_block if self.classification == EP else 0

    @property
    def label(self) -> str:
        """EP<n>, trivial or unresolved."""
        return f"EP{self.ep_order}" if self.classification == EP else self.classification


def default_cluster_tolerance(S: np.ndarray) -> float:
    return CLUSTER_TOLERANCE * max(float(np.linalg.norm(S, 2)), 1.0)


def _cluster(eigenvalues: np.ndarray, tol: float) -> List[Tuple[int, ...]]:
    # single linkage
    labels = list(range(len(eigenvalues)))
    for i in range(len(eigenvalues)):
        for j in range(i + 1, len(eigenvalues)):
            if abs(eigenvalues[i] - eigenvalues[j]) <= tol:
                old, new = labels[j], labels[i]
                labels = [new if label == old else label for label in labels]
    groups = {}
    for index, label in enumerate(labels):
        groups.setdefault(label, []).append(index)
    return [tuple(members) for members in groups.values()]


def _rank_structure(
    S: np.ndarray, lam: complex, multiplicity: int, rank_tol: float
) -> Tuple[Tuple[int, ...], Tuple[int, ...], bool]:
    """Ranks of (S - lam I)^k for k = 1..n, Jordan blocks, ill-conditioned flag."""
    n = S.shape[0]
    A = S - lam * np.eye(n)
    sigma_max = float(svdvals(A)[0])

    ranks = []
    ill_conditioned = False
    power = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        power = power @ A
        singular_values = svdvals(power)
        threshold = rank_tol * sigma_max**k
        ranks.append(int(np.sum(singular_values > threshold)))
        if k <= multiplicity and threshold > 0:
            near = (singular_values > threshold / ILL_CONDITIONED_FACTOR) & (
                singular_values < threshold * ILL_CONDITIONED_FACTOR
            )
            ill_conditioned |= bool(np.any(near))

    # number of blocks of size >= k is r_{k-1} - r_k
    previous = [n] + ranks
    at_least = [previous[k - 1] - previous[k] for k in range(1, n + 1)] + [0]
    blocks = []
    for size in range(n, 0, -1):
        blocks.extend([size] * (at_least[size - 1] - at_least[size]))

    if sum(blocks) != multiplicity or ranks[-1] != n - multiplicity:
        ill_conditioned = True
    return tuple(ranks), tuple(blocks), ill_conditioned


def eigendecompose(
    S: np.ndarray, cluster_tol: Optional[float] = None, rank_tol: float = RANK_TOLERANCE
) -> SpectralData:
    """
    Eigenvalues, eigenvectors and per-cluster Jordan structure of S.

    Args:
        S: 4x4 superoperator
        cluster_tol: Absolute clustering distance (default 1e-4 * max(||S||, 1))
        rank_tol: Rank threshold relative to sigma_max(S - lambda I)^k

    Returns:
        SpectralData with clusters ordered by (Re, Im) of their mean eigenvalue
    """
    S = np.asarray(S, dtype=complex)
    if cluster_tol is None:
        cluster_tol = default_cluster_tolerance(S)
    if not cluster_tol > 0:
        raise ParameterRangeError("cluster_tol", cluster_tol, "(0, inf)")
    if not rank_tol > 0:
        raise ParameterRangeError("rank_tol", rank_tol, "(0, inf)")

    values, vectors = np.linalg.eig(S)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]

    clusters = []
    for members in _cluster(values, cluster_tol):
        lam = complex(np.mean(values[list(members)]))
        if len(members) == 1:
            ranks, _, ill = _rank_structure(S, lam, 1, rank_tol)
            blocks, ill = (1,), False
        else:
            ranks, blocks, ill = _rank_structure(S, lam, len(members), rank_tol)
        geometric = len(blocks) if not ill else S.shape[0] - ranks[0]
        if ill:
            logger.warning(
                f"Ill-conditioned rank decision at lambda={lam:.6g}: ranks={ranks}"
            )
        clusters.append(
            EigenCluster(
                eigenvalue=lam,
                members=members,
                geometric_multiplicity=geometric,
                jordan_blocks=blocks if not ill else (1,) * len(members),
                rank_sequence=ranks,
                ill_conditioned=ill,
            )
        )
    clusters.sort(key=lambda c: (c.eigenvalue.real, c.eigenvalue.imag))

    return SpectralData(
        eigenvalues=values,
        eigenvectors=tuple(LiouvilleVector(vectors[:, i]) for i in range(S.shape[0])),
        clusters=tuple(clusters),
    )


def classify_degeneracy(
    p: SystemParams,
    cluster_tol: Optional[float] = None,
    rank_tol: float = RANK_TOLERANCE,
    builder=build_hybrid_liouvillian,
) -> List[DegeneracyRecord]:
    """One record per degenerate eigenvalue cluster of S(p)."""
    data = eigendecompose(builder(p), cluster_tol=cluster_tol, rank_tol=rank_tol)
    records = []
    for cluster in data.degenerate_clusters:
        if cluster.ill_conditioned:
            classification = UNRESOLVED
        elif cluster.geometric_multiplicity == cluster.algebraic_multiplicity:
            classification = TRIVIAL
        else:
            classification = EP
        records.append(
            DegeneracyRecord(
                params=p,
                eigenvalue=cluster.eigenvalue,
                order=cluster.algebraic_multiplicity,
                geometric_multiplicity=cluster.geometric_multiplicity,
                jordan_blocks=cluster.jordan_blocks,
                classification=classification,
                flagged=cluster.ill_conditioned,
            )
        )
    return records

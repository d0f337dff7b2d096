"""Eigenmodes of the hybrid Liouvillian viewed as (unnormalized) states."""

from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.params import SystemParams
from src.core.states import DensityMatrix, LiouvilleVector, devectorize
from src.liouvillian.operators import build_hybrid_liouvillian


@dataclass(frozen=True)
class Eigenmode:
    eigenvalue: complex
    state: DensityMatrix
    purity: float


def eigenmodes(p: SystemParams) -> List[Eigenmode]:
    """
    Right eigenvectors of S(p), sorted by decreasing real part.

    Modes with non-vanishing trace are trace-normalized; traceless modes
    (coherences) are scaled to unit norm and report NaN purity.
    """
    values, vectors = np.linalg.eig(build_hybrid_liouvillian(p))
    order = np.lexsort((-values.imag, -values.real))

    modes = []
    for index in order:
        vector = vectors[:, index]
        trace = vector[0] + vector[3]
        if abs(trace) > 1e-9:
            vector = vector / trace
            state = devectorize(LiouvilleVector(vector))
            purity = state.purity
        else:
            state = devectorize(LiouvilleVector(vector / np.linalg.norm(vector)))
            purity = float("nan")
        modes.append(Eigenmode(eigenvalue=complex(values[index]), state=state, purity=purity))
    return modes


def slowest_eigenmode(p: SystemParams) -> Eigenmode:
    return eigenmodes(p)[0]

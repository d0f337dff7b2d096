"""Three-segment hopping trajectory."""

import math
from typing import List

import numpy as np

from protocols.base import BaseTrajectory, Segment
from src.config.models import ProtocolParameters
from src.core.exceptions import ParameterRangeError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class HoppingTrajectory(BaseTrajectory):
    """
    Segments:
      (i)   [0, T1]          alpha = alpha_i,  theta = pi/2 (1 - chi t/T1),       q = 0
      (ii)  [T1, T1 + T2]    alpha = alpha_ii, theta = pi/2,                     q = q0
      (iii) [T1 + T2, T]     alpha = alpha_i,  theta = pi/2 (1 - chi (t - T)/T1), q = 0

    with T = 2 T1 + T2. theta jumps at both hop times.
    """

    kind = "hopping"

    def __init__(self, parameters: ProtocolParameters):
        super().__init__(parameters)
        p = parameters
        if p.T1 is not None and p.T2 is not None:
            T1, T2 = p.T1, p.T2
            if "T" in p.model_fields_set and not math.isclose(p.T, 2 * T1 + T2):
                logger.warning(f"Ignoring T={p.T}: hopping T is 2*T1 + T2 = {2 * T1 + T2}")
        elif p.T1 is None and p.T2 is None:
            T1, T2 = p.T1_fraction * p.T, p.T2_fraction * p.T
        elif p.T1 is not None:
            T1, T2 = p.T1, p.T - 2 * p.T1
        else:
            T1, T2 = 0.5 * (p.T - p.T2), p.T2
        if T1 <= 0 or T2 <= 0:
            raise ParameterRangeError("T1, T2", (T1, T2), "T1 > 0, T2 > 0 with T = 2*T1 + T2")
        self.T1 = T1
        self.T2 = T2
        self._T = 2 * T1 + T2

    @property
    def T(self) -> float:
        return self._T

    def _sweep(self, t: np.ndarray, origin: float):
        p = self.parameters
        theta = 0.5 * math.pi * (1 - self.chi * (t - origin) / self.T1)
        return np.full_like(t, p.alpha_i), theta, np.zeros_like(t)

    def _first(self, t):
        return self._sweep(t, 0.0)

    def _dwell(self, t):
        p = self.parameters
        return np.full_like(t, p.alpha_ii), np.full_like(t, 0.5 * math.pi), np.full_like(t, p.q0)

    def _last(self, t):
        return self._sweep(t, self.T)

    def segments(self) -> List[Segment]:
        hop_in, hop_out = self.T1, self.T1 + self.T2
        return [
            Segment(0.0, hop_in, self._first),
            Segment(hop_in, hop_out, self._dwell),
            Segment(hop_out, self.T, self._last),
        ]

    def describe(self):
        return {**super().describe(), "T1": self.T1, "T2": self.T2}

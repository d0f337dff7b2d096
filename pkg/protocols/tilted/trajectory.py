"""Tilted closed-loop trajectory."""

import math
from typing import List

import numpy as np

from protocols.base import BaseTrajectory, Segment


class TiltedTrajectory(BaseTrajectory):
    """
    alpha = alpha_max sin^2(pi t/T), q = q0 sin^2(pi t/T),
    theta = pi/2 - theta_amplitude sin(2 pi chi t/T).

    q grows together with the dissipation, so the loop starts and ends
    in the no-jump limit and passes through q = q0 at t = T/2.
    """

    kind = "tilted"

    def q_schedule(self, envelope: np.ndarray) -> np.ndarray:
        return self.q0 * envelope

    def _schedule(self, t: np.ndarray):
        p = self.parameters
        envelope = np.sin(math.pi * t / p.T) ** 2
        theta = math.pi / 2 - p.theta_amplitude * np.sin(2 * math.pi * self.chi * t / p.T)
        return p.alpha_max * envelope, theta, self.q_schedule(envelope)

    def segments(self) -> List[Segment]:
        return [Segment(0.0, self.T, self._schedule)]

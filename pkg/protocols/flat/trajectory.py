"""Flat-q closed-loop trajectory."""

import numpy as np

from protocols.tilted.trajectory import TiltedTrajectory


class FlatTrajectory(TiltedTrajectory):
    """Tilted loop in (alpha, theta) with q fixed at q0 throughout."""

    kind = "flat"

    def q_schedule(self, envelope: np.ndarray) -> np.ndarray:
        return np.full_like(envelope, self.q0)

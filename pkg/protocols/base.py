"""Base trajectory class for all control protocols."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from src.config.models import ProtocolParameters
from src.core.exceptions import ParameterRangeError
from src.core.params import SystemParams

Controls = Tuple[np.ndarray, np.ndarray, np.ndarray]
Schedule = Callable[[np.ndarray], Controls]


@dataclass(frozen=True)
class Segment:
    """Time interval on which the controls are smooth."""

    start: float
    stop: float
    schedule: Schedule

    @property
    def duration(self) -> float:
        return self.stop - self.start

    def controls(self, t) -> Controls:
        """(alpha, theta, q) arrays with the shape of ``t``."""
        t = np.asarray(t, dtype=float)
        alpha, theta, q = self.schedule(t)
        return tuple(
            np.broadcast_to(np.asarray(c, dtype=float), t.shape) for c in (alpha, theta, q)
        )


class BaseTrajectory(ABC):
    """
    Abstract base class for control trajectories t -> (alpha, theta, q).

    Subclasses build their piecewise-smooth schedule from validated
    ProtocolParameters and expose it as a list of segments. Control
    discontinuities happen only at segment boundaries (hop times).
    """

    kind: str = "custom"

    def __init__(self, parameters: ProtocolParameters):
        """
        Initialize the trajectory.

        Args:
            parameters: Validated protocol parameters
        """
        self.parameters = parameters
        self.q0 = parameters.q0
        self.chi = parameters.chi
        self.omega = parameters.omega

    @property
    def T(self) -> float:
        return self.parameters.T

    @abstractmethod
    def segments(self) -> List[Segment]:
        """Return the smooth pieces covering [0, T] in order."""

    @property
    def hop_times(self) -> Tuple[float, ...]:
        return tuple(segment.start for segment in self.segments()[1:])

    def sample(self, t) -> Controls:
        """
        Controls at arbitrary times in [0, T].

        At a hop time the later segment's value is returned.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or np.any(t > self.T):
            raise ParameterRangeError("t", float(np.min(t) if np.any(t < 0) else np.max(t)),
                                      f"[0, {self.T}]")
        segments = self.segments()
        starts = np.array([segment.start for segment in segments])
        index = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(segments) - 1)

        alpha, theta, q = (np.empty(t.shape) for _ in range(3))
        for i, segment in enumerate(segments):
            mask = index == i
            if np.any(mask):
                a, th, qq = segment.controls(t[mask])
                alpha[mask], theta[mask], q[mask] = a, th, qq
        return alpha, theta, q

    def params_at(self, t: float) -> SystemParams:
        alpha, theta, q = (float(c) for c in self.sample(t))
        return SystemParams.from_alpha(alpha, theta, q, omega=self.omega)

    def describe(self) -> Dict[str, Any]:
        """Metadata written next to results."""
        return {"kind": self.kind, "T": self.T, "hop_times": list(self.hop_times),
                **self.parameters.model_dump()}

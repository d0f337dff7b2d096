"""User-supplied schedule."""

from typing import Callable, List, Sequence

from protocols.base import BaseTrajectory, Controls, Segment
from src.config.models import ProtocolParameters
from src.core.exceptions import ParameterRangeError


class CustomTrajectory(BaseTrajectory):
    """
    Wraps a vectorized callable t -> (alpha, theta, q).

    ``hop_times`` split [0, T] into segments at the points where the
    callable is discontinuous; the integrator never steps across them.
    """

    kind = "custom"

    def __init__(
        self,
        parameters: ProtocolParameters,
        schedule: Callable[..., Controls],
        hop_times: Sequence[float] = (),
    ):
        super().__init__(parameters)
        hops = sorted({float(h) for h in hop_times})
        if any(not 0 < h < parameters.T for h in hops):
            raise ParameterRangeError("hop_times", tuple(hops), f"(0, {parameters.T})")
        self.schedule = schedule
        self._boundaries = [0.0, *hops, parameters.T]

    def segments(self) -> List[Segment]:
        return [
            Segment(start, stop, self.schedule)
            for start, stop in zip(self._boundaries[:-1], self._boundaries[1:])
        ]

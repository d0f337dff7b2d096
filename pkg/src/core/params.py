"""Physical parameter point of the driven, monitored qubit."""

import math
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.core.exceptions import ParameterRangeError


class SystemParams(BaseModel):
    """
    Point in parameter space.

    omega is the Rabi frequency, theta the field angle from the z axis,
    gamma the decay rate and q the quantum-jump weight (0: no-jump
    postselection, 1: Lindblad).
    """

    model_config = ConfigDict(frozen=True)

    omega: float = Field(default=1.0, ge=0.0)
    theta: float = Field(default=math.pi / 2, ge=0.0, le=math.pi)
    gamma: float = Field(default=0.0, ge=0.0)
    q: float = Field(default=0.0, ge=0.0, le=1.0)

    @classmethod
    def from_alpha(
        cls, alpha: float, theta: float, q: float, omega: float = 1.0
    ) -> "SystemParams":
        """Build from the dimensionless dissipation alpha = gamma / (2 omega)."""
        if alpha < 0:
            raise ParameterRangeError("alpha", alpha, "[0, inf)")
        return cls(omega=omega, theta=theta, gamma=2.0 * omega * alpha, q=q)

    @property
    def alpha(self) -> float:
        if self.omega <= 0:
            raise ParameterRangeError("omega", self.omega, "(0, inf)", "alpha needs omega > 0")
        return self.gamma / (2.0 * self.omega)

    @property
    def omega_x(self) -> float:
        return self.omega * math.sin(self.theta)

    @property
    def omega_z(self) -> float:
        return self.omega * math.cos(self.theta)

    @property
    def controls(self) -> Tuple[float, float, float]:
        return self.alpha, self.theta, self.q

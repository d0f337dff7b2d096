"""Trajectory factories and registry-driven loading."""

import importlib
from typing import Any, Callable, Optional, Sequence

from pydantic import ValidationError

from protocols.base import BaseTrajectory, Controls
from protocols.custom.trajectory import CustomTrajectory
from protocols.flat.trajectory import FlatTrajectory
from protocols.hopping.trajectory import HoppingTrajectory
from protocols.tilted.trajectory import TiltedTrajectory
from src.config.models import ProtocolParameters
from src.config.settings import settings
from src.constants import REFERENCE_OMEGA
from src.core.exceptions import ParameterRangeError
from src.utils.logger import get_logger

logger = get_logger(__name__)

# valid ranges quoted in error messages
PARAMETER_RANGES = {
    "q0": "[0, 1]",
    "chi": "{+1, -1}",
    "T": "(0, inf)",
    "omega": "[0, inf)",
    "alpha_max": "[0, inf)",
    "theta_amplitude": "[0, pi/2]",
    "T1": "(0, inf)",
    "T2": "(0, inf)",
    "T1_fraction": "(0, 0.5)",
    "T2_fraction": "(0, 1)",
    "alpha_i": "[0, inf)",
    "alpha_ii": "(0, inf)",
}


def make_parameters(
    base: Optional[ProtocolParameters] = None, **overrides: Any
) -> ProtocolParameters:
    """
    Validate protocol parameters, converting pydantic errors to ParameterRangeError.

    Args:
        base: Defaults to start from (e.g. a protocol config file)
        **overrides: Values that replace the defaults; None values are ignored
    """
    data = base.model_dump(exclude_unset=True) if base else {}
    explicit = {key: value for key, value in overrides.items() if value is not None}
    data.update(explicit)
    try:
        parameters = ProtocolParameters(**data)
    except ValidationError as e:
        error = e.errors()[0]
        name = ".".join(str(part) for part in error["loc"]) or "parameters"
        raise ParameterRangeError(
            name, error.get("input"), PARAMETER_RANGES.get(name, "see protocol docs"), error["msg"]
        ) from e
    return parameters


def make_tilted(q0: float, chi: int = 1, T: float = 100.0, omega: float = REFERENCE_OMEGA,
                **extra: Any) -> TiltedTrajectory:
    return TiltedTrajectory(make_parameters(q0=q0, chi=chi, T=T, omega=omega, **extra))


def make_flat(q0: float, chi: int = 1, T: float = 100.0, omega: float = REFERENCE_OMEGA,
              **extra: Any) -> FlatTrajectory:
    return FlatTrajectory(make_parameters(q0=q0, chi=chi, T=T, omega=omega, **extra))


def make_hopping(
    q0: float,
    chi: int = 1,
    T1: float = 20.0,
    T2: float = 60.0,
    alpha_i: float = 1e-5,
    alpha_ii: float = 10.0,
    omega: float = REFERENCE_OMEGA,
) -> HoppingTrajectory:
    """Hopping trajectory with total duration 2*T1 + T2."""
    return HoppingTrajectory(
        make_parameters(q0=q0, chi=chi, T=2 * T1 + T2, T1=T1, T2=T2, alpha_i=alpha_i,
                        alpha_ii=alpha_ii, omega=omega)
    )


def make_custom(
    schedule: Callable[..., Controls],
    T: float,
    hop_times: Sequence[float] = (),
    omega: float = 1.0,
    chi: int = 1,
    q0: float = 0.0,
) -> CustomTrajectory:
    """Trajectory from a vectorized callable t -> (alpha, theta, q)."""
    return CustomTrajectory(make_parameters(q0=q0, chi=chi, T=T, omega=omega), schedule,
                            hop_times)


def _load_trajectory_class(class_path: str):
    try:
        module_path, class_name = class_path.rsplit(".", 1)
        module = importlib.import_module(module_path)
        return getattr(module, class_name)
    except Exception as e:
        logger.error(f"Failed to load trajectory class {class_path}: {e}")
        raise


def build_trajectory(kind: str, **overrides: Any) -> BaseTrajectory:
    """
    Trajectory of a registered kind with YAML defaults and validated overrides.

    Args:
        kind: Registry key (tilted, flat, hopping)
        **overrides: Protocol parameters replacing the config-file defaults

    Returns:
        Trajectory instance
    """
    entry = settings.get_registry().get_protocol(kind)
    if entry is None:
        raise ParameterRangeError(
            "kind", kind, str(tuple(settings.get_registry().get_enabled_protocols()))
        )
    config = settings.get_protocol_config(kind)
    trajectory_class = _load_trajectory_class(entry.trajectory_class)
    parameters = make_parameters(config.parameters, **overrides)
    logger.debug(f"Built {kind} trajectory with {parameters.model_dump()}")
    return trajectory_class(parameters)

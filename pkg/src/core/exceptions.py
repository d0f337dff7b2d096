"""Exception hierarchy for the simulator."""

from typing import Any, Dict, Optional


class HybridLiouvillianError(Exception):
    """Base class for every error raised by this package."""


class ParameterRangeError(HybridLiouvillianError, ValueError):
    """A parameter lies outside its valid range."""

    def __init__(self, name: str, value: Any, valid_range: str, message: Optional[str] = None):
        self.name = name
        self.value = value
        self.valid_range = valid_range
        text = f"{name}={value!r} outside valid range {valid_range}"
        if message:
            text = f"{text}: {message}"
        super().__init__(text)


class AtlasDomainError(ParameterRangeError):
    """An analytic atlas formula was evaluated outside its validity window."""


class IntegrationFault(HybridLiouvillianError, ArithmeticError):
    """The propagated state left the physical set beyond tolerance."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        details = ", ".join(f"{key}={value!r}" for key, value in self.diagnostics.items())
        super().__init__(f"{message} ({details})" if details else message)


class UndefinedFidelityError(HybridLiouvillianError, ZeroDivisionError):
    """Normalized fidelity requested for a state with zero trace."""


class SweepPointError(HybridLiouvillianError):
    """A single sweep point failed; carries the swept parameter value."""

    def __init__(self, parameter: str, value: float, cause: Exception):
        self.parameter = parameter
        self.value = value
        self.cause = cause
        super().__init__(f"sweep point {parameter}={value!r} failed: {cause}")

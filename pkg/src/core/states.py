"""Density matrices, Liouville vectors and the reference states."""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from src.constants import (
    HERMITICITY_TOLERANCE,
    POSITIVITY_TOLERANCE,
    REFERENCE_STATE_NAMES,
    TRACE_TOLERANCE,
)
from src.core.exceptions import ParameterRangeError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LiouvilleVector:
    """Vectorized density matrix in the order (uu, ud, du, dd)."""

    components: np.ndarray

    def __post_init__(self):
        components = np.asarray(self.components, dtype=complex)
        if components.size != 4:
            raise ParameterRangeError("components", components.shape, "exactly 4 entries")
        object.__setattr__(self, "components", _frozen(components.reshape(4)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LiouvilleVector):
            return NotImplemented
        return bool(np.array_equal(self.components, other.components))

    @property
    def trace(self) -> complex:
        return complex(self.components[0] + self.components[3])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    2x2 qubit state.

    Constructed states are checked for Hermiticity, positivity and
    trace in (0, 1]. Unnormalized propagated states keep trace <= 1.
    Pass ``validate=False`` to wrap an arbitrary 2x2 matrix, e.g. when
    devectorizing an eigenvector.
    """

    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ParameterRangeError("matrix", matrix.shape, "shape (2, 2)")
        object.__setattr__(self, "matrix", _frozen(matrix))
        if self.validate:
            self._check()

    def _check(self) -> None:
        deviation = self.hermiticity_deviation
        if deviation > HERMITICITY_TOLERANCE:
            raise ParameterRangeError(
                "hermiticity_deviation", deviation, f"[0, {HERMITICITY_TOLERANCE}]"
            )
        if self.min_eigenvalue < -POSITIVITY_TOLERANCE:
            raise ParameterRangeError(
                "min_eigenvalue", self.min_eigenvalue, f"[-{POSITIVITY_TOLERANCE}, inf)"
            )
        trace = self.trace
        if not 0.0 < trace <= 1.0 + TRACE_TOLERANCE:
            raise ParameterRangeError("trace", trace, "(0, 1]")

    def __eq__(self, other) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    @classmethod
    def from_ket(cls, ket: np.ndarray) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex).reshape(2)
        ket = ket / np.linalg.norm(ket)
        return cls(np.outer(ket, ket.conj()))

    @property
    def trace(self) -> float:
        return float(np.real(self.matrix[0, 0] + self.matrix[1, 1]))

    @property
    def hermiticity_deviation(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    @property
    def min_eigenvalue(self) -> float:
        hermitian_part = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(hermitian_part)[0])

    @property
    def purity(self) -> float:
        """Tr(rho^2) of the trace-normalized state."""
        normalized = self.matrix / (self.matrix[0, 0] + self.matrix[1, 1])
        return float(np.real(np.trace(normalized @ normalized)))

    def normalized(self) -> "DensityMatrix":
        trace = self.trace
        if trace <= 0:
            raise ParameterRangeError("trace", trace, "(0, 1]", "cannot normalize")
        return DensityMatrix(self.matrix / trace, validate=self.validate)

    def overlap(self, other: "DensityMatrix") -> float:
        """Re Tr(self @ other)."""
        return float(np.real(np.trace(self.matrix @ other.matrix)))


class ReferenceStates:
    """Basis and equator states of the qubit: up, down, plus, minus."""

    KETS: Dict[str, np.ndarray] = {
        "up": np.array([1.0, 0.0], dtype=complex),
        "down": np.array([0.0, 1.0], dtype=complex),
        "plus": np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
        "minus": np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    }

    @classmethod
    def projector(cls, name: str) -> DensityMatrix:
        if name not in cls.KETS:
            raise ParameterRangeError("state", name, str(tuple(cls.KETS)))
        return DensityMatrix.from_ket(cls.KETS[name])

    @classmethod
    def chiral_target(cls, chi: int) -> DensityMatrix:
        """|+><+| for chi = +1, |-><-| for chi = -1."""
        if chi not in (1, -1):
            raise ParameterRangeError("chi", chi, "{+1, -1}")
        return cls.projector("plus" if chi == 1 else "minus")

    @classmethod
    def initial_state(cls, name: str) -> DensityMatrix:
        if name not in REFERENCE_STATE_NAMES:
            raise ParameterRangeError("initial", name, str(REFERENCE_STATE_NAMES))
        if name == "mixed":
            return DensityMatrix(
                0.5 * (cls.projector("plus").matrix + cls.projector("minus").matrix)
            )
        return cls.projector(name)


def vectorize(rho: DensityMatrix) -> LiouvilleVector:
    return LiouvilleVector(rho.matrix.reshape(4))


def devectorize(vector: LiouvilleVector) -> DensityMatrix:
    """Exact inverse of :func:`vectorize`; no physical validation."""
    return DensityMatrix(vector.components.reshape(2, 2), validate=False)

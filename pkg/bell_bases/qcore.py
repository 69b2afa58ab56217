"""Pure-state and density-matrix primitives shared by the Bell-like basis toolkit."""
from __future__ import annotations

import logging
from typing import Any, Iterable, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_TOL = 1e-10
ZERO_CLAMP = 1e-12
MAX_QUBITS = 14


class QuantumError(ValueError):
    """Base exception for invalid quantum-state inputs."""


class DimensionMismatchError(QuantumError):
    """Raised when two operands live in Hilbert spaces of different size."""

    def __init__(self, message: str, expected: int, actual: int) -> None:
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class InvalidSubsetError(QuantumError):
    """Raised for empty, duplicated or out-of-range qubit subsets."""


class NotHermitianError(QuantumError):
    """Raised when a matrix expected to be Hermitian is not."""


class DomainError(QuantumError):
    """Raised when a scalar argument is outside its mathematical domain."""


def _freeze(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, dtype=complex, copy=True)
    frozen.setflags(write=False)
    return frozen


class StateVector(BaseModel):
    """Normalised n-qubit pure state; qubit 1 is the most significant index bit."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_qubits: int
    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _coerce_amplitudes(cls, value: Any) -> np.ndarray:
        array = np.asarray(value, dtype=complex)
        if array.ndim != 1:
            raise ValueError(f"amplitudes must be one-dimensional, got shape {array.shape}")
        return _freeze(array)

    @model_validator(mode="after")
    def _check_invariants(self) -> "StateVector":
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must lie in 1..{MAX_QUBITS}, got {self.n_qubits}")
        if self.amplitudes.shape[0] != 2**self.n_qubits:
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {self.amplitudes.shape[0]}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm={norm!r})")
        return self

    @classmethod
    def from_amplitudes(cls, amplitudes: Iterable[complex]) -> "StateVector":
        array = np.asarray(list(amplitudes), dtype=complex)
        n_qubits = max(array.shape[0], 1).bit_length() - 1
        return cls(n_qubits=n_qubits, amplitudes=array)

    @classmethod
    def computational(cls, label: str) -> "StateVector":
        """Return the computational basis state ``|x1 x2 ... xn>`` for a bitstring label."""

        n_qubits = len(label)
        if n_qubits == 0 or set(label) - {"0", "1"}:
            raise QuantumError(f"label must be a non-empty bitstring, got {label!r}")
        amplitudes = np.zeros(2**n_qubits, dtype=complex)
        amplitudes[int(label, 2)] = 1.0
        return cls(n_qubits=n_qubits, amplitudes=amplitudes)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def tensor(self) -> np.ndarray:
        """View the amplitudes as a rank-n tensor with one axis per qubit."""

        return self.amplitudes.reshape((2,) * self.n_qubits)

    def support(self, atol: float = 1e-12) -> List[int]:
        return [int(i) for i in np.flatnonzero(np.abs(self.amplitudes) > atol)]

    def allclose(self, other: "StateVector", atol: float = 1e-12) -> bool:
        return self.n_qubits == other.n_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0.0, atol=atol)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n_qubits == other.n_qubits and bool(
            np.array_equal(self.amplitudes, other.amplitudes)
        )

    __hash__ = None  # type: ignore[assignment]


class DensityMatrix(BaseModel):
    """Hermitian, positive semidefinite, unit-trace matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce_entries(cls, value: Any) -> np.ndarray:
        array = np.asarray(value, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {array.shape}")
        return _freeze(array)

    @model_validator(mode="after")
    def _check_invariants(self) -> "DensityMatrix":
        if self.dim < 1 or self.dim & (self.dim - 1):
            raise ValueError(f"dim must be a power of two, got {self.dim}")
        if self.entries.shape != (self.dim, self.dim):
            raise ValueError(f"entries shape {self.entries.shape} does not match dim {self.dim}")
        deviation = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        trace = complex(np.trace(self.entries))
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must equal 1, got {trace!r}")
        smallest = float(np.linalg.eigvalsh(self.entries)[0])
        if smallest < -EIGEN_TOL:
            raise ValueError(f"matrix has a negative eigenvalue {smallest:.3e}")
        return self

    @classmethod
    def from_matrix(cls, matrix: Any) -> "DensityMatrix":
        array = np.asarray(matrix, dtype=complex)
        return cls(dim=array.shape[0], entries=array)

    @classmethod
    def pure(cls, state: StateVector) -> "DensityMatrix":
        return cls(dim=state.dim, entries=np.outer(state.amplitudes, state.amplitudes.conj()))

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


class QubitSubset(BaseModel):
    """A set of 1-based qubit indices, stored in ascending order."""

    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...]

    @field_validator("indices", mode="before")
    @classmethod
    def _normalise(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, int):
            value = (value,)
        items = [int(item) for item in value]
        if not items:
            raise ValueError("qubit subset must be non-empty")
        if len(set(items)) != len(items):
            raise ValueError(f"qubit indices must be distinct, got {items}")
        if min(items) < 1:
            raise ValueError(f"qubit indices are 1-based, got {items}")
        return tuple(sorted(items))

    @classmethod
    def of(cls, qubits: "SubsetLike") -> "QubitSubset":
        if isinstance(qubits, QubitSubset):
            return qubits
        try:
            return cls(indices=qubits)
        except ValueError as exc:
            raise InvalidSubsetError(str(exc)) from exc

    def check_range(self, n_qubits: int) -> "QubitSubset":
        if self.indices[-1] > n_qubits:
            raise InvalidSubsetError(
                f"qubit index {self.indices[-1]} out of range for {n_qubits} qubits"
            )
        return self

    def complement(self, n_qubits: int) -> "QubitSubset":
        rest = [q for q in range(1, n_qubits + 1) if q not in self.indices]
        if not rest:
            raise InvalidSubsetError("complement of the full register is empty")
        return QubitSubset(indices=rest)


SubsetLike = Union[QubitSubset, Sequence[int], int]


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return ``<a|b>``, conjugate-linear in the first argument."""

    if a.n_qubits != b.n_qubits:
        raise DimensionMismatchError(
            "inner product of states with different qubit counts",
            expected=a.n_qubits,
            actual=b.n_qubits,
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _reduced_matrix(state: StateVector, keep: QubitSubset) -> np.ndarray:
    kept = [q - 1 for q in keep.indices]
    traced = [q for q in range(state.n_qubits) if q not in kept]
    block = np.transpose(state.tensor(), kept + traced).reshape(2 ** len(kept), -1)
    rho = block @ block.conj().T
    return (rho + rho.conj().T) / 2


def partial_trace(state: StateVector, keep: SubsetLike) -> DensityMatrix:
    """Reduced density matrix on ``keep``; kept qubits stay in ascending order."""

    subset = QubitSubset.of(keep).check_range(state.n_qubits)
    rho = _reduced_matrix(state, subset)
    return DensityMatrix(dim=rho.shape[0], entries=rho)


def _as_hermitian(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.entries
    matrix = np.asarray(rho, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(
            f"expected a square matrix, got shape {matrix.shape}",
            expected=matrix.shape[0] if matrix.ndim else 0,
            actual=matrix.shape[-1] if matrix.ndim else 0,
        )
    deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
    if deviation > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    return matrix


def hermitian_eigenvalues(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""

    return np.linalg.eigvalsh(_as_hermitian(rho))[::-1]


def entropy_of_spectrum(eigenvalues: Iterable[float]) -> float:
    values = np.asarray(list(eigenvalues), dtype=float)
    values = np.where(values < ZERO_CLAMP, 0.0, values)
    positive = values[values > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def von_neumann_entropy(rho: Union[DensityMatrix, np.ndarray]) -> float:
    """Entropy in bits, with eigenvalues below ``ZERO_CLAMP`` treated as exact zeros."""

    eigenvalues = hermitian_eigenvalues(rho)
    entropy = entropy_of_spectrum(eigenvalues)
    return float(min(max(entropy, 0.0), np.log2(len(eigenvalues))))


def binary_entropy(x: float) -> float:
    """Shannon entropy ``h(x)`` in bits with ``h(0) = h(1) = 0``."""

    if not -ZERO_CLAMP <= x <= 1.0 + ZERO_CLAMP:
        raise DomainError(f"binary entropy needs 0 <= x <= 1, got {x!r}")
    return entropy_of_spectrum([x, 1.0 - x])


__all__ = [
    "DensityMatrix",
    "DimensionMismatchError",
    "DomainError",
    "InvalidSubsetError",
    "NotHermitianError",
    "QuantumError",
    "QubitSubset",
    "StateVector",
    "binary_entropy",
    "entropy_of_spectrum",
    "hermitian_eigenvalues",
    "inner_product",
    "partial_trace",
    "von_neumann_entropy",
]

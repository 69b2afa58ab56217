"""Gate kernels acting on state vectors through index-space operations.

Controlled families never build a 2^n x 2^n matrix: the firing condition is
evaluated on the control bits of every amplitude index and the target unitary
is applied to the matching rows only.
"""
from __future__ import annotations

import logging
from functools import lru_cache, reduce
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from .models import PhaseId
from .qcore import DimensionMismatchError, QuantumError, QubitSubset, StateVector, SubsetLike

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
R_BRAID = (
    np.array(
        [
            [1, 0, 0, 1],
            [0, 1, -1, 0],
            [0, 1, 1, 0],
            [-1, 0, 0, 1],
        ],
        dtype=complex,
    )
    / np.sqrt(2)
)

Predicate = Callable[[np.ndarray], np.ndarray]
TargetBlock = Tuple[Sequence[int], np.ndarray]


class GateError(QuantumError):
    """Base class for invalid gate applications."""


class QubitIndexError(GateError):
    """Raised when a qubit index falls outside ``1..n``."""


class QubitOverlapError(GateError):
    """Raised when control and target registers share a qubit."""


class NonUnitaryError(GateError):
    """Raised when a supplied gate matrix is not unitary."""


def kron_all(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of ``matrices`` in order; the empty product is ``[[1]]``."""

    return reduce(np.kron, matrices, np.eye(1, dtype=complex))


def _check_unitary(matrix: np.ndarray, n_targets: int) -> np.ndarray:
    unitary = np.asarray(matrix, dtype=complex)
    expected = 2**n_targets
    if unitary.shape != (expected, expected):
        raise DimensionMismatchError(
            f"unitary of shape {unitary.shape} does not act on {n_targets} qubit(s)",
            expected=expected,
            actual=unitary.shape[0] if unitary.ndim else 0,
        )
    deviation = float(np.max(np.abs(unitary.conj().T @ unitary - np.eye(expected))))
    if deviation > UNITARY_TOL:
        raise NonUnitaryError(f"matrix is not unitary (max deviation {deviation:.3e})")
    return unitary


def _check_qubits(n_qubits: int, qubits: Sequence[int]) -> List[int]:
    ordered = [int(q) for q in qubits]
    for qubit in ordered:
        if not 1 <= qubit <= n_qubits:
            raise QubitIndexError(f"qubit {qubit} out of range for {n_qubits} qubits")
    if len(set(ordered)) != len(ordered):
        raise QubitOverlapError(f"qubit list {ordered} repeats an index")
    return ordered


def _control_list(n_qubits: int, controls: SubsetLike) -> List[int]:
    if isinstance(controls, QubitSubset):
        controls = controls.indices
    elif isinstance(controls, int):
        controls = [controls]
    ordered = _check_qubits(n_qubits, controls)
    if not ordered:
        raise GateError("at least one control qubit is required")
    return ordered


def index_bits(n_qubits: int, qubits: Sequence[int]) -> np.ndarray:
    """Bit values of ``qubits`` for every amplitude index, shape ``(2^n, len(qubits))``."""

    indices = np.arange(2**n_qubits)[:, None]
    shifts = n_qubits - np.asarray(qubits, dtype=int)[None, :]
    return (indices >> shifts) & 1


def _apply_matrix(amplitudes: np.ndarray, n_qubits: int, unitary: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    axes = [q - 1 for q in targets]
    k = len(axes)
    leading = list(range(k))
    tensor = np.moveaxis(amplitudes.reshape((2,) * n_qubits), axes, leading)
    shape = tensor.shape
    updated = (unitary @ tensor.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(updated, leading, axes).reshape(-1)


def apply_unitary(state: StateVector, unitary: np.ndarray, targets: Sequence[int]) -> StateVector:
    """Apply a k-qubit unitary on ``targets``; the first target is the most significant factor."""

    ordered = _check_qubits(state.n_qubits, targets)
    matrix = _check_unitary(unitary, len(ordered))
    amplitudes = _apply_matrix(state.amplitudes, state.n_qubits, matrix, ordered)
    return StateVector(n_qubits=state.n_qubits, amplitudes=amplitudes)


def apply_single(state: StateVector, gate: np.ndarray, target: int) -> StateVector:
    return apply_unitary(state, gate, [target])


def _apply_controlled(
    state: StateVector,
    controls: SubsetLike,
    blocks: Sequence[TargetBlock],
    predicate: Predicate,
) -> StateVector:
    n_qubits = state.n_qubits
    control_qubits = _control_list(n_qubits, controls)
    checked: List[Tuple[List[int], np.ndarray]] = []
    used = set(control_qubits)
    for targets, unitary in blocks:
        ordered = _check_qubits(n_qubits, targets)
        if not ordered:
            raise GateError("a target block needs at least one qubit")
        clash = used.intersection(ordered)
        if clash:
            raise QubitOverlapError(f"qubits {sorted(clash)} are used twice")
        used.update(ordered)
        checked.append((ordered, _check_unitary(unitary, len(ordered))))

    fires = predicate(index_bits(n_qubits, control_qubits))
    amplitudes = np.array(state.amplitudes)
    for targets, unitary in checked:
        # fires depends on control bits only, so it is constant along each target block
        applied = _apply_matrix(amplitudes, n_qubits, unitary, targets)
        amplitudes = np.where(fires, applied, amplitudes)
    return StateVector(n_qubits=n_qubits, amplitudes=amplitudes)


def _all_ones(bits: np.ndarray) -> np.ndarray:
    return np.all(bits == 1, axis=1)


def _odd_parity(bits: np.ndarray) -> np.ndarray:
    return (np.sum(bits, axis=1) % 2) == 1


def _all_equal(bits: np.ndarray) -> np.ndarray:
    return np.all(bits == bits[:, :1], axis=1)


def apply_all1_controlled(
    state: StateVector, controls: SubsetLike, targets: Sequence[int], unitary: np.ndarray
) -> StateVector:
    """``C^n(U)``: apply ``unitary`` on ``targets`` when every control bit is 1."""

    return _apply_controlled(state, controls, [(targets, unitary)], _all_ones)


def apply_odd1_controlled(
    state: StateVector, controls: SubsetLike, target_blocks: Sequence[TargetBlock]
) -> StateVector:
    """Odd-one control: apply each block unitary when the control parity is 1."""

    if not target_blocks:
        raise GateError("odd-one control needs at least one target block")
    return _apply_controlled(state, controls, target_blocks, _odd_parity)


def apply_allequal_controlled(
    state: StateVector, controls: SubsetLike, targets: Sequence[int], unitary: np.ndarray
) -> StateVector:
    """All-equal control: apply ``unitary`` when the control bits are all 0 or all 1.

    The defining text calls the gate valid only for more than two controls while
    exhibiting the two-control case ``diag{X, I, I, X}``; two or more are accepted.
    """

    if len(_control_list(state.n_qubits, controls)) < 2:
        raise GateError("all-equal control needs at least 2 control qubits")
    return _apply_controlled(state, controls, [(targets, unitary)], _all_equal)


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    if control == target:
        raise QubitOverlapError(f"control and target are both qubit {control}")
    return apply_all1_controlled(state, [control], [target], X)


def apply_multi_phase_z(state: StateVector, qubits: SubsetLike) -> StateVector:
    """Negate every amplitude whose listed bits are all 1."""

    listed = _control_list(state.n_qubits, qubits)
    signs = np.where(_all_ones(index_bits(state.n_qubits, listed)), -1.0, 1.0)
    return StateVector(n_qubits=state.n_qubits, amplitudes=state.amplitudes * signs)


def apply_braid_r(state: StateVector, pair_start: int) -> StateVector:
    if not 1 <= pair_start < state.n_qubits:
        raise QubitIndexError(
            f"braid pair ({pair_start}, {pair_start + 1}) out of range for {state.n_qubits} qubits"
        )
    return apply_unitary(state, R_BRAID, [pair_start, pair_start + 1])


@lru_cache(maxsize=None)
def phase_terms(p: int, m: int) -> Tuple[Tuple[int, ...], ...]:
    """Index sets of the cyclic product terms of ``Pp`` on ``m`` control bits.

    Windows start at positions ``1 .. m-p+2`` and each spans p cyclically
    consecutive indices. Terms are kept as sets with duplicates dropped, so
    ``P2`` is the full cycle and ``Pm`` collapses to one term.
    """

    if not 2 <= p <= m:
        raise GateError(f"cyclic terms need 2 <= p <= m, got p={p}, m={m}")
    terms: List[Tuple[int, ...]] = []
    for start in range(m - p + 2):
        term = tuple(sorted(((start + j) % m) + 1 for j in range(p)))
        if term not in terms:
            terms.append(term)
    return tuple(terms)


def phase_exponents(phase: PhaseId, m: int, bits: np.ndarray) -> np.ndarray:
    """Vectorised exponent of (-1) for each row of control bits, shape ``(rows, m)``."""

    rows = np.asarray(bits, dtype=int)
    if rows.ndim != 2 or rows.shape[1] != m:
        raise DimensionMismatchError(
            f"expected control bit rows of width {m}, got shape {rows.shape}",
            expected=m,
            actual=rows.shape[-1] if rows.ndim else 0,
        )
    if phase.is_z:
        return (rows[:, 0] * np.sum(rows[:, 1:], axis=1)) % 2
    if phase.p > m:
        raise GateError(f"phase {phase} is not defined for m={m}")
    if phase.p == 0:
        return np.zeros(rows.shape[0], dtype=int)
    if phase.p == 1:
        return np.sum(rows, axis=1) % 2
    total = np.zeros(rows.shape[0], dtype=int)
    for term in phase_terms(phase.p, m):
        total += np.prod(rows[:, [q - 1 for q in term]], axis=1)
    return total % 2


def phase_exponent(phase: PhaseId, m: int, y: Sequence[int]) -> int:
    """Exponent of (-1) that ``phase`` assigns to the control assignment ``y``."""

    if len(y) != m:
        raise DimensionMismatchError(
            f"control assignment has {len(y)} bits, expected {m}", expected=m, actual=len(y)
        )
    return int(phase_exponents(phase, m, np.asarray([list(y)]))[0])


def apply_phase(state: StateVector, phase: Union[PhaseId, str], controls: Sequence[int]) -> StateVector:
    """Multiply each amplitude by the phase sign of its control bits (``controls[0]`` is x1)."""

    phase_id = PhaseId.parse(phase)
    ordered = _control_list(state.n_qubits, list(controls))
    exponents = phase_exponents(phase_id, len(ordered), index_bits(state.n_qubits, ordered))
    signs = np.where(exponents == 1, -1.0, 1.0)
    return StateVector(n_qubits=state.n_qubits, amplitudes=state.amplitudes * signs)


__all__ = [
    "H",
    "I2",
    "R_BRAID",
    "X",
    "Y",
    "Z",
    "GateError",
    "NonUnitaryError",
    "QubitIndexError",
    "QubitOverlapError",
    "apply_all1_controlled",
    "apply_allequal_controlled",
    "apply_braid_r",
    "apply_cnot",
    "apply_multi_phase_z",
    "apply_odd1_controlled",
    "apply_phase",
    "apply_single",
    "apply_unitary",
    "index_bits",
    "kron_all",
    "phase_exponent",
    "phase_exponents",
    "phase_terms",
]

"""Three-step generation of Bell-like bases and the special-case constructions."""
from __future__ import annotations

import logging
import time
from itertools import product
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .gates import (
    H,
    X,
    Z,
    apply_all1_controlled,
    apply_allequal_controlled,
    apply_braid_r,
    apply_odd1_controlled,
    apply_phase,
    apply_single,
    kron_all,
)
from .models import BasisSpec, ControlledFamily, EntangledBasis, EquivalenceReport
from .qcore import QuantumError, StateVector

logger = logging.getLogger(__name__)

ORTHONORMAL_TOL = 1e-12
EQUIVALENCE_TOL = 1e-10
AMPLITUDE_TOL = 1e-12


class BasisSpecError(QuantumError):
    """Raised for invalid basis specifications or labels."""


class BasisGenerationError(QuantumError):
    """Raised when a generated basis breaks one of its structural guarantees."""


class OrthonormalityResult(NamedTuple):
    passed: bool
    max_deviation: float


def all_labels(n: int) -> List[str]:
    return ["".join(bits) for bits in product("01", repeat=n)]


def _check_label(n: int, label: str) -> None:
    if len(label) != n or set(label) - {"0", "1"}:
        raise BasisSpecError(f"label {label!r} is not a {n}-bit string")


def _resolve_controls(spec: BasisSpec, controls: Optional[Sequence[int]]) -> Tuple[List[int], List[int]]:
    if controls is None:
        return list(spec.controls), list(spec.targets)
    chosen = [int(q) for q in controls]
    if len(chosen) != spec.m or len(set(chosen)) != spec.m:
        raise BasisSpecError(f"expected {spec.m} distinct control qubits, got {chosen}")
    if any(not 1 <= q <= spec.n for q in chosen):
        raise BasisSpecError(f"control qubits {chosen} out of range for n={spec.n}")
    targets = [q for q in range(1, spec.n + 1) if q not in chosen]
    return chosen, targets


def _controlled_step(
    state: StateVector, family: ControlledFamily, controls: List[int], targets: List[int]
) -> StateVector:
    if not targets:
        return state
    if family is ControlledFamily.O1:
        return apply_odd1_controlled(state, controls, [([t], X) for t in targets])
    flips = kron_all([X] * len(targets))
    if family is ControlledFamily.AQ:
        return apply_allequal_controlled(state, controls, targets, flips)
    return apply_all1_controlled(state, controls, targets, flips)


def generate_state(
    spec: BasisSpec,
    label: str,
    controls: Optional[Sequence[int]] = None,
    phase_first: bool = False,
) -> StateVector:
    """Run the three generation steps on ``|label>``.

    Parameters
    ----------
    spec: BasisSpec
        The ``(n, m, Cq, Pp)`` basis name.
    label: str
        Computational basis label ``x1 x2 ... xn``.
    controls: Sequence[int] | None
        Control qubit positions; the first ``m`` qubits when omitted.
    phase_first: bool
        Apply the phase step before the controlled-U step. Both orders give the
        same state because the phase only reads control bits.

    Returns
    -------
    StateVector
        The normalised Bell-like state.
    """

    _check_label(spec.n, label)
    control_qubits, targets = _resolve_controls(spec, controls)
    state = StateVector.computational(label)
    for qubit in control_qubits:
        state = apply_single(state, H, qubit)

    steps: List[Callable[[StateVector], StateVector]] = [
        lambda s: _controlled_step(s, spec.family, control_qubits, targets),
        lambda s: apply_phase(s, spec.phase, control_qubits),
    ]
    if phase_first:
        steps.reverse()
    for step in steps:
        state = step(state)
    return state


def _check_equal_weights(basis: EntangledBasis, terms: int) -> None:
    magnitude = 1.0 / np.sqrt(terms)
    for label, state in basis.states.items():
        moduli = np.abs(state.amplitudes)
        nonzero = moduli > AMPLITUDE_TOL
        if int(np.count_nonzero(nonzero)) != terms or not np.allclose(
            moduli[nonzero], magnitude, rtol=0.0, atol=AMPLITUDE_TOL
        ):
            raise BasisGenerationError(
                f"state {label} of {basis.name} is not an equal-weight {terms}-term superposition"
            )


def _sample_labels(labels: List[str]) -> List[str]:
    picks = {0, len(labels) // 2, len(labels) - 1}
    return [labels[i] for i in sorted(picks)]


def generate_basis(spec: BasisSpec, controls: Optional[Sequence[int]] = None) -> EntangledBasis:
    """Generate all 2^n states of ``spec`` and verify the basis before returning it."""

    started = time.perf_counter()
    labels = all_labels(spec.n)
    states = {label: generate_state(spec, label, controls) for label in labels}

    for label in _sample_labels(labels):
        reordered = generate_state(spec, label, controls, phase_first=True)
        if not np.array_equal(reordered.amplitudes, states[label].amplitudes):
            raise BasisGenerationError(
                f"controlled-U and phase steps do not commute for {spec.name}, label {label}"
            )

    basis = EntangledBasis(name=spec.name, n_qubits=spec.n, states=states, spec=spec)
    _check_equal_weights(basis, 2**spec.m)
    result = check_orthonormal(basis)
    if not result.passed:
        raise BasisGenerationError(
            f"{spec.name} is not orthonormal (max deviation {result.max_deviation:.3e})"
        )
    logger.info(
        "Generated basis",
        extra={"spec": spec.name, "elapsed": time.perf_counter() - started},
    )
    return basis


def bell_basis(n: int, label: str) -> StateVector:
    """``(|0 x2..xn> + (-1)^x1 |1 ~x2..~xn>)/sqrt(2)`` built directly from the label."""

    _check_label(n, label)
    rest = int(label[1:], 2) if n > 1 else 0
    flipped = (2 ** (n - 1) - 1) ^ rest
    amplitudes = np.zeros(2**n, dtype=complex)
    amplitudes[rest] = 1.0 / np.sqrt(2)
    amplitudes[2 ** (n - 1) + flipped] = (-1) ** int(label[0]) / np.sqrt(2)
    return StateVector(n_qubits=n, amplitudes=amplitudes)


def graph_basis(n: int, label: str) -> StateVector:
    """``C(Z^{n-1}) H^n |label>`` with qubit 1 controlling a Z on every other qubit."""

    if n < 2:
        raise BasisSpecError("the graph basis needs at least 2 qubits")
    _check_label(n, label)
    state = StateVector.computational(label)
    for qubit in range(1, n + 1):
        state = apply_single(state, H, qubit)
    return apply_all1_controlled(state, [1], list(range(2, n + 1)), kron_all([Z] * (n - 1)))


def braid_basis(n: int, label: str) -> StateVector:
    """Cascade ``R`` over adjacent pairs from ``(n-1, n)`` up to ``(1, 2)``."""

    if n < 2:
        raise BasisSpecError("the braid basis needs at least 2 qubits")
    _check_label(n, label)
    state = StateVector.computational(label)
    for pair_start in range(n - 1, 0, -1):
        state = apply_braid_r(state, pair_start)
    return state


def _basis_from(n: int, name: str, builder: Callable[[int, str], StateVector]) -> EntangledBasis:
    return EntangledBasis(
        name=name, n_qubits=n, states={label: builder(n, label) for label in all_labels(n)}
    )


def bell_basis_set(n: int) -> EntangledBasis:
    return _basis_from(n, f"({n},Bell)", bell_basis)


def graph_basis_set(n: int) -> EntangledBasis:
    return _basis_from(n, f"({n},Graph)", graph_basis)


def braid_basis_set(n: int) -> EntangledBasis:
    return _basis_from(n, f"({n},Braid)", braid_basis)


StateCollection = Union[EntangledBasis, Sequence[StateVector]]


def _labelled(states: StateCollection) -> List[Tuple[str, StateVector]]:
    if isinstance(states, EntangledBasis):
        return list(states.states.items())
    items = list(states)
    width = max(len(items) - 1, 1).bit_length()
    return [(format(i, f"0{width}b"), state) for i, state in enumerate(items)]


def check_orthonormal(states: StateCollection, tol: float = ORTHONORMAL_TOL) -> OrthonormalityResult:
    """Largest entry of ``|G - I|`` for the Gram matrix of ``states``."""

    items = _labelled(states)
    if not items:
        return OrthonormalityResult(passed=False, max_deviation=float("inf"))
    n_qubits = items[0][1].n_qubits
    rows = np.vstack([state.amplitudes for _, state in items])
    gram = rows.conj() @ rows.T
    deviation = float(np.max(np.abs(gram - np.eye(len(items)))))
    complete = len(items) == 2**n_qubits
    return OrthonormalityResult(passed=complete and deviation < tol, max_deviation=deviation)


def _support_key(state: StateVector, atol: float) -> Tuple[int, ...]:
    return tuple(state.support(atol))


def equivalence_up_to_sign_and_relabeling(
    left: StateCollection, right: StateCollection, atol: float = EQUIVALENCE_TOL
) -> EquivalenceReport:
    """Pair every state of ``left`` with a state of ``right`` equal up to a factor of +-1.

    States are bucketed by their support pattern and matched greedily inside each
    bucket. ``mapping[label] = (partner, sign)`` means ``left[label] = sign * right[partner]``.
    """

    left_items = _labelled(left)
    right_items = _labelled(right)
    names = {
        "left_name": left.name if isinstance(left, EntangledBasis) else "",
        "right_name": right.name if isinstance(right, EntangledBasis) else "",
    }
    if len(left_items) != len(right_items) or (
        left_items and left_items[0][1].n_qubits != right_items[0][1].n_qubits
    ):
        return EquivalenceReport(
            matched=False, first_mismatch=left_items[0][0] if left_items else None, **names
        )

    buckets: Dict[Tuple[int, ...], List[Tuple[str, StateVector]]] = {}
    for label, state in right_items:
        buckets.setdefault(_support_key(state, atol), []).append((label, state))

    mapping: Dict[str, Tuple[str, int]] = {}
    for label, state in left_items:
        candidates = buckets.get(_support_key(state, atol), [])
        found: Optional[Tuple[int, str, int]] = None
        for position, (partner, other) in enumerate(candidates):
            for sign in (1, -1):
                if np.allclose(state.amplitudes, sign * other.amplitudes, rtol=0.0, atol=atol):
                    found = (position, partner, sign)
                    break
            if found:
                break
        if found is None:
            logger.debug("No partner state", extra={"label": label, **names})
            return EquivalenceReport(matched=False, mapping=mapping, first_mismatch=label, **names)
        position, partner, sign = found
        del candidates[position]
        mapping[label] = (partner, sign)
    return EquivalenceReport(matched=True, mapping=mapping, **names)


__all__ = [
    "BasisGenerationError",
    "BasisSpecError",
    "OrthonormalityResult",
    "all_labels",
    "bell_basis",
    "bell_basis_set",
    "braid_basis",
    "braid_basis_set",
    "check_orthonormal",
    "equivalence_up_to_sign_and_relabeling",
    "generate_basis",
    "generate_state",
    "graph_basis",
    "graph_basis_set",
]

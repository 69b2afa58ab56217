"""Tests for the gate kernels and the phase operations."""
from __future__ import annotations

import numpy as np
import pytest

from bell_bases.gates import (
    H,
    R_BRAID,
    X,
    Z,
    GateError,
    NonUnitaryError,
    QubitIndexError,
    QubitOverlapError,
    apply_all1_controlled,
    apply_allequal_controlled,
    apply_braid_r,
    apply_cnot,
    apply_multi_phase_z,
    apply_odd1_controlled,
    apply_phase,
    apply_single,
    apply_unitary,
    kron_all,
    phase_exponent,
    phase_terms,
)
from bell_bases.models import PhaseId
from bell_bases.qcore import DimensionMismatchError, StateVector


def _basis(label: str) -> StateVector:
    return StateVector.computational(label)


def _single_label(state: StateVector) -> str:
    (index,) = state.support()
    return format(index, f"0{state.n_qubits}b")


@pytest.mark.parametrize(
    "label, expected",
    [("000", "000"), ("100", "100"), ("110", "111"), ("111", "110"), ("011", "011")],
)
def test_all1_controlled_toffoli(label: str, expected: str) -> None:
    assert _single_label(apply_all1_controlled(_basis(label), [1, 2], [3], X)) == expected


@pytest.mark.parametrize(
    "label, expected",
    [("000", "000"), ("100", "101"), ("010", "011"), ("110", "110"), ("111", "111")],
)
def test_odd1_controlled_fires_on_odd_parity(label: str, expected: str) -> None:
    assert _single_label(apply_odd1_controlled(_basis(label), [1, 2], [([3], X)])) == expected


@pytest.mark.parametrize(
    "label, expected",
    [("000", "001"), ("110", "111"), ("100", "100"), ("010", "010"), ("111", "110")],
)
def test_allequal_controlled_fires_when_controls_agree(label: str, expected: str) -> None:
    assert _single_label(apply_allequal_controlled(_basis(label), [1, 2], [3], X)) == expected


def test_allequal_needs_two_controls() -> None:
    with pytest.raises(GateError):
        apply_allequal_controlled(_basis("00"), [1], [2], X)


def test_odd1_applies_every_block() -> None:
    state = apply_odd1_controlled(_basis("1000"), [1], [([2], X), ([3, 4], np.kron(X, X))])
    assert _single_label(state) == "1111"


def test_single_control_families_agree() -> None:
    plus = apply_single(_basis("00"), H, 1)
    a1 = apply_all1_controlled(plus, [1], [2], X)
    o1 = apply_odd1_controlled(plus, [1], [([2], X)])
    np.testing.assert_array_equal(a1.amplitudes, o1.amplitudes)
    np.testing.assert_array_equal(a1.amplitudes, apply_cnot(plus, 1, 2).amplitudes)


def test_control_target_overlap_is_rejected() -> None:
    with pytest.raises(QubitOverlapError):
        apply_all1_controlled(_basis("000"), [1, 2], [2], X)
    with pytest.raises(QubitOverlapError):
        apply_odd1_controlled(_basis("000"), [1], [([2], X), ([2], X)])
    with pytest.raises(QubitOverlapError):
        apply_cnot(_basis("00"), 1, 1)


def test_qubit_range_and_unitarity_checks() -> None:
    with pytest.raises(QubitIndexError):
        apply_single(_basis("00"), X, 3)
    with pytest.raises(NonUnitaryError):
        apply_single(_basis("00"), np.array([[1, 1], [0, 1]]), 1)
    with pytest.raises(DimensionMismatchError):
        apply_all1_controlled(_basis("000"), [1], [2, 3], X)
    with pytest.raises(QubitIndexError):
        apply_braid_r(_basis("00"), 2)


def test_apply_unitary_orders_targets_by_argument() -> None:
    # CNOT with control on the first listed target
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    assert _single_label(apply_unitary(_basis("001"), cnot, [3, 1])) == "101"
    assert _single_label(apply_unitary(_basis("100"), cnot, [1, 3])) == "101"


def test_multi_phase_z_negates_all_ones_pattern() -> None:
    state = apply_single(apply_single(_basis("00"), H, 1), H, 2)
    signs = np.sign(np.real(apply_multi_phase_z(state, [1, 2]).amplitudes))
    np.testing.assert_array_equal(signs, [1, 1, 1, -1])


def test_braid_operator_is_unitary_and_entangling() -> None:
    np.testing.assert_allclose(R_BRAID.conj().T @ R_BRAID, np.eye(4), atol=1e-12)
    state = apply_braid_r(_basis("00"), 1)
    np.testing.assert_allclose(state.amplitudes, np.array([1, 0, 0, -1]) / np.sqrt(2), atol=1e-12)


def test_kron_all_of_nothing_is_scalar_one() -> None:
    np.testing.assert_array_equal(kron_all([]), np.eye(1))
    assert kron_all([X, Z]).shape == (4, 4)


@pytest.mark.parametrize(
    "p, m, expected",
    [
        (2, 2, ((1, 2),)),
        (2, 3, ((1, 2), (2, 3), (1, 3))),
        (3, 3, ((1, 2, 3),)),
        (2, 4, ((1, 2), (2, 3), (3, 4), (1, 4))),
        (3, 4, ((1, 2, 3), (2, 3, 4), (3, 4, 1))),
        (3, 5, ((1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 1))),
        (4, 4, ((1, 2, 3, 4),)),
        (4, 5, ((1, 2, 3, 4), (2, 3, 4, 5), (3, 4, 5, 1))),
    ],
)
def test_phase_terms_use_consecutive_windows(p: int, m: int, expected) -> None:
    assert phase_terms(p, m) == tuple(tuple(sorted(term)) for term in expected)


def test_phase_exponents() -> None:
    assert phase_exponent(PhaseId(p=0), 3, [1, 1, 1]) == 0
    assert phase_exponent(PhaseId(p=1), 3, [1, 1, 0]) == 0
    assert phase_exponent(PhaseId(p=1), 3, [1, 0, 0]) == 1
    # y1 y2 + y2 y3 + y1 y3 = 3 for all ones
    assert phase_exponent(PhaseId(p=2), 3, [1, 1, 1]) == 1
    assert phase_exponent(PhaseId(p=3), 3, [1, 1, 1]) == 1
    assert phase_exponent(PhaseId(p=3), 3, [1, 1, 0]) == 0
    # x1x2x3 + x2x3x4 + x3x4x1 at m=4
    assert phase_exponent(PhaseId(p=3), 4, [1, 1, 1, 0]) == 1
    assert phase_exponent(PhaseId(p=3), 4, [0, 1, 1, 1]) == 1
    assert phase_exponent(PhaseId(p=3), 4, [1, 0, 1, 1]) == 1
    assert phase_exponent(PhaseId(p=3), 4, [1, 1, 0, 1]) == 0
    assert phase_exponent(PhaseId(p=3), 4, [1, 1, 1, 1]) == 1
    assert phase_exponent(PhaseId.z(), 3, [1, 1, 1]) == 0
    assert phase_exponent(PhaseId.z(), 3, [1, 0, 1]) == 1
    assert phase_exponent(PhaseId.z(), 3, [0, 1, 1]) == 0
    with pytest.raises(GateError):
        phase_exponent(PhaseId(p=4), 3, [1, 1, 1])
    with pytest.raises(DimensionMismatchError):
        phase_exponent(PhaseId(p=1), 3, [1, 1])


def test_apply_phase_reads_control_bits_only() -> None:
    state = _basis("111")
    # Pz on controls (1, 2): y1 * y2 = 1
    flipped = apply_phase(state, "Pz", [1, 2])
    assert flipped.amplitudes[7] == pytest.approx(-1.0)
    untouched = apply_phase(_basis("011"), "Pz", [1, 2])
    assert untouched.amplitudes[3] == pytest.approx(1.0)

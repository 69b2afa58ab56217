"""Tests for the entanglement and correlation measures."""
from __future__ import annotations

import numpy as np
import pytest

from bell_bases.basisgen import bell_basis, generate_basis, generate_state
from bell_bases.correlations import (
    AvgEntropyConvention,
    CorrelationError,
    InvarianceError,
    avg_entanglement_entropy,
    basis_report,
    concurrence_pure_1_rest,
    cut_subsets,
    eof_from_concurrence,
    ggm,
    log_negativity_pure,
    monogamy_score,
    negativity_partial_transpose,
    negativity_pure,
    one_way_work_deficit,
    pair_marginal,
    quantum_discord,
    wootters_concurrence,
)
from bell_bases.gates import H, apply_single
from bell_bases.models import BasisSpec, ControlledFamily, EntangledBasis, MeasureConfig
from bell_bases.qcore import DimensionMismatchError, DomainError, StateVector, partial_trace, von_neumann_entropy
from bell_bases.tests.golden_tables import (
    AMENDED_DELTA_D,
    CORRELATION_TABLE,
    DELTA_D_TOLERANCE,
    DERIVED_DELTA_D,
    printed_tolerance,
)

FAMILIES = (ControlledFamily.O1, ControlledFamily.AQ, ControlledFamily.A1)

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def _projector(vector: np.ndarray) -> np.ndarray:
    return np.outer(vector, vector.conj())


def _random_local_unitary(rng: np.random.Generator) -> np.ndarray:
    raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(raw)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _table_cases():
    for row in CORRELATION_TABLE:
        for position, family in enumerate(FAMILIES):
            if row.ggm[position] is None:
                continue
            yield pytest.param(row, position, family, id=f"({row.n},{row.m},{family.label},{row.phase})")


@pytest.mark.parametrize("row, position, family", list(_table_cases()))
def test_closed_form_measures_match_table(row, position: int, family: ControlledFamily) -> None:
    spec = BasisSpec.of(row.n, row.m, family, row.phase)
    report = basis_report(spec, include_optimized=False)
    for field, printed in (
        ("ggm", row.ggm[position]),
        ("concurrence", row.concurrence[position]),
        ("avg_entropy", row.avg_entropy[position]),
    ):
        assert getattr(report, field) == pytest.approx(float(printed), abs=printed_tolerance(printed)), field
    if family is ControlledFamily.O1:
        assert report.delta_concurrence == pytest.approx(float(row.delta_c), abs=1e-6)
    assert report.delta_discord is None
    assert report.delta_deficit is None


def test_report_derives_eof_and_negativity_from_concurrence() -> None:
    report = basis_report(BasisSpec.of(4, 3, "A1", "P0"), include_optimized=False)
    assert report.eof == pytest.approx(eof_from_concurrence(report.concurrence))
    assert report.negativity == pytest.approx(report.concurrence / 2)
    assert report.log_negativity == pytest.approx(np.log2(report.concurrence + 1))
    assert report.conventions["avg_entropy"] == "subset"


def test_bell_pair_measures() -> None:
    bell = StateVector(n_qubits=2, amplitudes=PHI_PLUS)
    assert concurrence_pure_1_rest(bell) == pytest.approx(1.0)
    assert wootters_concurrence(_projector(PHI_PLUS)) == pytest.approx(1.0)
    assert wootters_concurrence(np.eye(4) / 4) == pytest.approx(0.0, abs=1e-12)
    assert negativity_pure(bell) == pytest.approx(0.5)
    assert log_negativity_pure(bell) == pytest.approx(1.0)
    assert negativity_partial_transpose(bell, [1]) == pytest.approx(0.5)
    assert ggm(bell) == pytest.approx(0.5)


def test_wootters_concurrence_is_local_unitary_invariant() -> None:
    rng = np.random.default_rng(7)
    mixed = 0.7 * _projector(PHI_PLUS) + 0.3 * np.eye(4) / 4
    reference = wootters_concurrence(mixed)
    # 0.7 * 1 - 0.3 / 2
    assert reference == pytest.approx(0.55)
    for _ in range(5):
        local = np.kron(_random_local_unitary(rng), _random_local_unitary(rng))
        rotated = local @ mixed @ local.conj().T
        assert wootters_concurrence(rotated) == pytest.approx(reference, abs=1e-10)


def test_wootters_rejects_wrong_size() -> None:
    with pytest.raises(DimensionMismatchError):
        wootters_concurrence(np.eye(8) / 8)


def test_eof_range_and_endpoints() -> None:
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1.0) == pytest.approx(1.0)
    # h((1 + sqrt(1 - 0.75)) / 2) = h(0.75)
    assert eof_from_concurrence(np.sqrt(0.75)) == pytest.approx(0.811278, abs=1e-6)
    with pytest.raises(DomainError):
        eof_from_concurrence(1.5)


def test_pure_negativity_matches_partial_transpose() -> None:
    for spec in (BasisSpec.of(3, 2, "A1", "P0"), BasisSpec.of(4, 3, "A1", "P2"), BasisSpec.of(4, 2, "O1", "P0")):
        state = generate_state(spec, "0" * spec.n)
        assert negativity_partial_transpose(state, [1]) == pytest.approx(negativity_pure(state), abs=1e-10)


def test_partial_transpose_rejects_bad_subsystem() -> None:
    with pytest.raises(CorrelationError):
        negativity_partial_transpose(_projector(PHI_PLUS), [3])


def test_product_state_has_no_entanglement() -> None:
    state = apply_single(StateVector.computational("000"), H, 2)
    assert ggm(state) == pytest.approx(0.0, abs=1e-12)
    assert concurrence_pure_1_rest(state) == pytest.approx(0.0, abs=1e-12)
    assert avg_entanglement_entropy(state) == pytest.approx(0.0, abs=1e-12)


def test_cut_subsets_conventions() -> None:
    assert len(cut_subsets(4)) == 10
    bipartitions = cut_subsets(4, AvgEntropyConvention.BIPARTITION)
    assert len(bipartitions) == 7
    assert (3, 4) not in bipartitions and (1, 2) in bipartitions
    assert cut_subsets(5, AvgEntropyConvention.BIPARTITION) == cut_subsets(5)


def test_avg_entropy_conventions_differ_only_at_even_n() -> None:
    state = generate_state(BasisSpec.of(4, 3, "O1", "P3"), "0000")
    subset = avg_entanglement_entropy(state, AvgEntropyConvention.SUBSET)
    bipartition = avg_entanglement_entropy(state, "bipartition")
    assert subset == pytest.approx(1.3, abs=1e-9)
    singles = sum(von_neumann_entropy(partial_trace(state, [q])) for q in range(1, 5))
    # a pair and its complement carry the same entropy, so the bipartition keeps half the pair total
    assert bipartition == pytest.approx((singles + (subset * 10 - singles) / 2) / 7, abs=1e-9)
    odd = generate_state(BasisSpec.of(3, 2, "A1", "P0"), "000")
    assert avg_entanglement_entropy(odd, "subset") == pytest.approx(avg_entanglement_entropy(odd, "bipartition"))


def test_pair_marginal_orders_node_first() -> None:
    state = StateVector.computational("001")
    rho = pair_marginal(state, 3, 1)
    # node qubit 3 is |1>, partner qubit 1 is |0>
    assert rho.entries[2, 2] == pytest.approx(1.0)
    with pytest.raises(CorrelationError):
        pair_marginal(state, 2, 2)


def test_discord_and_deficit_of_bell_and_classical_states() -> None:
    assert quantum_discord(_projector(PHI_PLUS)) == pytest.approx(1.0, abs=1e-8)
    assert one_way_work_deficit(_projector(PHI_PLUS)) == pytest.approx(1.0, abs=1e-8)
    classical = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    assert quantum_discord(classical) == pytest.approx(0.0, abs=1e-8)
    assert one_way_work_deficit(classical) == pytest.approx(0.0, abs=1e-8)


def test_monogamy_scores_of_ghz() -> None:
    ghz = bell_basis(3, "000")
    assert monogamy_score("concurrence", ghz) == pytest.approx(1.0, abs=1e-9)
    # pairs of a GHZ state are classically correlated
    assert monogamy_score("discord", ghz) == pytest.approx(1.0, abs=1e-6)
    assert monogamy_score("deficit", ghz) == pytest.approx(1.0, abs=1e-6)


def test_squared_monogamy_convention() -> None:
    w = StateVector(n_qubits=3, amplitudes=np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3))
    unsquared = monogamy_score("concurrence", w)
    squared = monogamy_score("concurrence", w, MeasureConfig(squared_delta_c=True))
    # C(1:23) = 2 sqrt(2)/3 and C(1,j) = 2/3
    assert unsquared == pytest.approx(2 * np.sqrt(2) / 3 - 4 / 3)
    assert squared == pytest.approx(0.0, abs=1e-10)


def test_monogamy_node_out_of_range() -> None:
    with pytest.raises(CorrelationError):
        monogamy_score("concurrence", bell_basis(3, "000"), MeasureConfig(monogamy_node=4))


@pytest.mark.parametrize("measure", ["concurrence", "discord", "deficit"])
def test_monogamy_needs_three_qubits(measure: str) -> None:
    with pytest.raises(CorrelationError, match="at least 3 qubits"):
        monogamy_score(measure, StateVector(n_qubits=2, amplitudes=PHI_PLUS))


@pytest.mark.parametrize("key", [(3, 2, "P0"), (4, 3, "P3")])
def test_discord_monogamy_reaches_exact_minimum(key) -> None:
    n, m, phase = key
    state = generate_state(BasisSpec.of(n, m, "O1", phase), "0" * n)
    assert monogamy_score("discord", state) == pytest.approx(DERIVED_DELTA_D[key], abs=2e-5)


def test_derived_discord_column_covers_table() -> None:
    assert set(DERIVED_DELTA_D) == {(row.n, row.m, row.phase) for row in CORRELATION_TABLE}
    for row in CORRELATION_TABLE:
        key = (row.n, row.m, row.phase)
        off = abs(DERIVED_DELTA_D[key] - float(row.delta_d)) > DELTA_D_TOLERANCE
        assert off == (key in AMENDED_DELTA_D), key
        if key in AMENDED_DELTA_D:
            assert DERIVED_DELTA_D[key] == 1.0


def test_basis_report_detects_broken_invariance() -> None:
    spec = BasisSpec.of(3, 2, "A1", "P0")
    basis = generate_basis(spec)
    states = dict(basis.states)
    # replace every non-reference state with a product state
    for label in list(states)[1:]:
        states[label] = StateVector.computational(label)
    tampered = EntangledBasis(name=basis.name, n_qubits=3, states=states, spec=spec)
    with pytest.raises(InvarianceError):
        basis_report(spec, include_optimized=False, basis=tampered)


def test_single_qubit_states_are_rejected() -> None:
    with pytest.raises(CorrelationError):
        concurrence_pure_1_rest(StateVector.computational("1"))


@pytest.mark.slow
@pytest.mark.parametrize("row", CORRELATION_TABLE, ids=lambda row: f"({row.n},{row.m},{row.phase})")
def test_discord_monogamy_column(row) -> None:
    key = (row.n, row.m, row.phase)
    report = basis_report(BasisSpec.of(row.n, row.m, "O1", row.phase))
    assert report.delta_discord == pytest.approx(DERIVED_DELTA_D[key], abs=DELTA_D_TOLERANCE)
    if key not in AMENDED_DELTA_D:
        assert report.delta_discord == pytest.approx(float(row.delta_d), abs=DELTA_D_TOLERANCE)
    # node marginals are maximally mixed, so both optimised scores agree
    assert report.delta_deficit == pytest.approx(report.delta_discord, abs=2e-3)


@pytest.mark.slow
def test_unit_concurrence_for_every_odd_parity_basis_up_to_six_qubits() -> None:
    half = np.eye(2) / 2
    for n in range(2, 7):
        for m in range(1, n):
            for p in list(range(m + 1)) + ["z"]:
                spec = BasisSpec.of(n, m, "O1", f"P{p}")
                basis = generate_basis(spec)
                for state in basis.states.values():
                    assert concurrence_pure_1_rest(state) == pytest.approx(1.0, abs=1e-10), spec.name
                    block = state.amplitudes.reshape(2, -1)
                    rho = block @ block.conj().T
                    np.testing.assert_allclose(rho, half, atol=1e-10)

"""Entanglement and quantum-correlation measures for Bell-like basis states."""
from __future__ import annotations

import logging
import math
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .basisgen import all_labels, generate_basis
from .gates import Y
from .measurement_search import Objective, SearchResult, minimize_measurement
from .models import BasisSpec, CorrelationReport, EntangledBasis, MeasureConfig
from .qcore import (
    DensityMatrix,
    DimensionMismatchError,
    DomainError,
    QuantumError,
    StateVector,
    binary_entropy,
    entropy_of_spectrum,
    hermitian_eigenvalues,
    partial_trace,
    von_neumann_entropy,
)

logger = logging.getLogger(__name__)

CLOSED_FORM_TOL = 1e-9
OPTIMIZED_TOL = 2e-3
YY = np.kron(Y, Y)

MatrixLike = Union[DensityMatrix, np.ndarray]


class CorrelationError(QuantumError):
    """Raised when a measure is requested outside its domain."""


class InvarianceError(CorrelationError):
    """Raised when states of one basis disagree on a measure."""


class Measure(str, Enum):
    CONCURRENCE = "concurrence"
    DISCORD = "discord"
    DEFICIT = "deficit"


class AvgEntropyConvention(str, Enum):
    SUBSET = "subset"
    BIPARTITION = "bipartition"


def _matrix(rho: MatrixLike) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.entries
    return np.asarray(rho, dtype=complex)


def _require_qubits(state: StateVector, minimum: int, what: str) -> None:
    if state.n_qubits < minimum:
        raise CorrelationError(f"{what} needs at least {minimum} qubits, got {state.n_qubits}")


def concurrence_pure_1_rest(state: StateVector, node: int = 1) -> float:
    """``2 sqrt(det rho_node)`` for the ``node : rest`` cut of a pure state."""

    _require_qubits(state, 2, "pure-state concurrence")
    rho = partial_trace(state, [node]).entries
    det = max(float(np.real(np.linalg.det(rho))), 0.0)
    return float(min(2.0 * math.sqrt(det), 1.0))


def wootters_concurrence(rho: MatrixLike) -> float:
    """Two-qubit concurrence from the singular values of ``sqrt(rho) (Y x Y) sqrt(rho)*``."""

    matrix = _matrix(rho)
    if matrix.shape != (4, 4):
        raise DimensionMismatchError(
            f"Wootters concurrence needs a 4x4 matrix, got shape {matrix.shape}",
            expected=4,
            actual=matrix.shape[0] if matrix.ndim else 0,
        )
    weights, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    weights = np.where(weights < 1e-12, 0.0, weights)
    root = (vectors * np.sqrt(weights)) @ vectors.conj().T
    singular = np.linalg.svd(root @ YY @ root.conj(), compute_uv=False)
    return float(max(0.0, singular[0] - np.sum(singular[1:])))


def eof_from_concurrence(c: float) -> float:
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise DomainError(f"concurrence must lie in [0, 1], got {c!r}")
    clipped = min(max(c, 0.0), 1.0)
    return binary_entropy((1.0 + math.sqrt(1.0 - clipped**2)) / 2.0)


def entanglement_of_formation(state: StateVector, node: int = 1) -> float:
    return eof_from_concurrence(concurrence_pure_1_rest(state, node))


def negativity_pure(state: StateVector, node: int = 1) -> float:
    """Half the concurrence, which is the negativity of a pure ``node : rest`` cut."""

    return concurrence_pure_1_rest(state, node) / 2.0


def log_negativity_pure(state: StateVector, node: int = 1) -> float:
    return float(np.log2(2.0 * negativity_pure(state, node) + 1.0))


def negativity_partial_transpose(
    rho: Union[StateVector, MatrixLike], subsystem: Sequence[int]
) -> float:
    """Sum of the magnitudes of the negative eigenvalues of ``rho^{T_A}``."""

    if isinstance(rho, StateVector):
        matrix = np.outer(rho.amplitudes, rho.amplitudes.conj())
    else:
        matrix = _matrix(rho)
    n_qubits = matrix.shape[0].bit_length() - 1
    if matrix.shape != (2**n_qubits, 2**n_qubits):
        raise DimensionMismatchError(
            f"expected a 2^n square matrix, got shape {matrix.shape}",
            expected=2**n_qubits,
            actual=matrix.shape[0],
        )
    qubits = sorted({int(q) for q in subsystem})
    if not qubits or qubits[0] < 1 or qubits[-1] > n_qubits:
        raise CorrelationError(f"subsystem {list(subsystem)} invalid for {n_qubits} qubits")
    tensor = matrix.reshape((2,) * (2 * n_qubits))
    for qubit in qubits:
        tensor = np.swapaxes(tensor, qubit - 1, n_qubits + qubit - 1)
    eigenvalues = np.linalg.eigvalsh(tensor.reshape(matrix.shape))
    return float(-np.sum(eigenvalues[eigenvalues < 0.0]))


def cut_subsets(n_qubits: int, convention: AvgEntropyConvention = AvgEntropyConvention.SUBSET) -> List[Tuple[int, ...]]:
    """Subsets ``A`` with ``|A| <= n // 2``.

    The bipartition convention drops one side of every half-half cut, keeping
    the half that contains qubit 1, so each cut ``A : rest`` appears once.
    """

    subsets: List[Tuple[int, ...]] = []
    for size in range(1, n_qubits // 2 + 1):
        for subset in combinations(range(1, n_qubits + 1), size):
            if (
                convention is AvgEntropyConvention.BIPARTITION
                and 2 * size == n_qubits
                and subset[0] != 1
            ):
                continue
            subsets.append(subset)
    return subsets


def cut_spectra(state: StateVector) -> Dict[Tuple[int, ...], np.ndarray]:
    """Descending spectrum of ``rho_A`` for every subset ``A`` with ``|A| <= n // 2``."""

    _require_qubits(state, 2, "cut spectra")
    return {
        subset: hermitian_eigenvalues(partial_trace(state, subset))
        for subset in cut_subsets(state.n_qubits)
    }


def ggm(state: StateVector, spectra: Optional[Dict[Tuple[int, ...], np.ndarray]] = None) -> float:
    """Generalised geometric measure: one minus the largest Schmidt weight over all cuts."""

    spectra = spectra if spectra is not None else cut_spectra(state)
    largest = max(float(values[0]) for values in spectra.values())
    return float(min(max(1.0 - largest, 0.0), 0.5))


def avg_entanglement_entropy(
    state: StateVector,
    convention: Union[AvgEntropyConvention, str] = AvgEntropyConvention.SUBSET,
    spectra: Optional[Dict[Tuple[int, ...], np.ndarray]] = None,
) -> float:
    """Mean von Neumann entropy over the cuts selected by ``convention``."""

    _require_qubits(state, 2, "average entanglement entropy")
    chosen = AvgEntropyConvention(convention)
    spectra = spectra if spectra is not None else cut_spectra(state)
    subsets = cut_subsets(state.n_qubits, chosen)
    entropies = [entropy_of_spectrum(spectra[subset]) for subset in subsets]
    return float(np.mean(entropies))


def pair_marginal(state: StateVector, node: int, other: int) -> DensityMatrix:
    """Two-qubit marginal ordered as ``(node, other)``."""

    if node == other:
        raise CorrelationError(f"pair marginal needs two distinct qubits, got {node} twice")
    rho = partial_trace(state, [node, other])
    if node < other:
        return rho
    swapped = rho.entries.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
    return DensityMatrix(dim=4, entries=swapped)


def _measured_marginal(rho: np.ndarray, measured_party: int) -> np.ndarray:
    tensor = rho.reshape(2, 2, 2, 2)
    if measured_party == 1:
        return np.einsum("abcb->ac", tensor)
    return np.einsum("abad->bd", tensor)


def discord_search(rho: MatrixLike, cfg: Optional[MeasureConfig] = None) -> Tuple[float, SearchResult]:
    cfg = cfg or MeasureConfig()
    matrix = _matrix(rho)
    search = minimize_measurement(matrix, Objective.DISCORD, cfg)
    value = (
        von_neumann_entropy(_measured_marginal(matrix, cfg.measured_party))
        - von_neumann_entropy(matrix)
        + search.value
    )
    return max(float(value), 0.0), search


def deficit_search(rho: MatrixLike, cfg: Optional[MeasureConfig] = None) -> Tuple[float, SearchResult]:
    cfg = cfg or MeasureConfig()
    matrix = _matrix(rho)
    search = minimize_measurement(matrix, Objective.DEFICIT, cfg)
    return max(float(search.value - von_neumann_entropy(matrix)), 0.0), search


def quantum_discord(rho: MatrixLike, cfg: Optional[MeasureConfig] = None) -> float:
    """Discord with a projective measurement on ``cfg.measured_party``."""

    return discord_search(rho, cfg)[0]


def one_way_work_deficit(rho: MatrixLike, cfg: Optional[MeasureConfig] = None) -> float:
    """``min S(sum_k Pi_k rho Pi_k) - S(rho)`` over measurements on ``cfg.measured_party``."""

    return deficit_search(rho, cfg)[0]


def _monogamy(
    measure: Measure, state: StateVector, cfg: MeasureConfig
) -> Tuple[float, List[str]]:
    _require_qubits(state, 3, "monogamy score")
    node = cfg.monogamy_node
    if node > state.n_qubits:
        raise CorrelationError(f"monogamy node {node} out of range for {state.n_qubits} qubits")
    others = [q for q in range(1, state.n_qubits + 1) if q != node]
    marginals = [pair_marginal(state, node, other) for other in others]
    warnings: List[str] = []

    if measure is Measure.CONCURRENCE:
        power = 2 if cfg.squared_delta_c else 1
        whole = concurrence_pure_1_rest(state, node) ** power
        pairwise = [wootters_concurrence(rho) ** power for rho in marginals]
        return float(whole - sum(pairwise)), warnings

    search = discord_search if measure is Measure.DISCORD else deficit_search
    whole = von_neumann_entropy(partial_trace(state, [node]))
    pairwise = []
    for other, rho in zip(others, marginals):
        value, result = search(rho, cfg)
        pairwise.append(value)
        warnings.extend(f"pair ({node},{other}): {message}" for message in result.warnings)
    return float(whole - sum(pairwise)), warnings


def monogamy_score(
    measure: Union[Measure, str], state: StateVector, cfg: Optional[MeasureConfig] = None
) -> float:
    """``Q(node : rest)`` minus the pairwise ``Q(node, j)`` summed over every other qubit."""

    return _monogamy(Measure(measure), state, cfg or MeasureConfig())[0]


def closed_form_measures(state: StateVector, cfg: MeasureConfig) -> Dict[str, float]:
    spectra = cut_spectra(state)
    node = cfg.monogamy_node
    concurrence = concurrence_pure_1_rest(state, node)
    return {
        "ggm": ggm(state, spectra),
        "concurrence": concurrence,
        "avg_entropy": avg_entanglement_entropy(state, AvgEntropyConvention.SUBSET, spectra),
        "avg_entropy_bipartition": avg_entanglement_entropy(
            state, AvgEntropyConvention.BIPARTITION, spectra
        ),
        "eof": eof_from_concurrence(concurrence),
        "log_negativity": log_negativity_pure(state, node),
        "negativity": negativity_pure(state, node),
        "delta_concurrence": _monogamy(Measure.CONCURRENCE, state, cfg)[0],
    }


def optimized_measures(state: StateVector, cfg: MeasureConfig) -> Tuple[Dict[str, float], List[str]]:
    delta_discord, discord_warnings = _monogamy(Measure.DISCORD, state, cfg)
    delta_deficit, deficit_warnings = _monogamy(Measure.DEFICIT, state, cfg)
    return (
        {"delta_discord": delta_discord, "delta_deficit": delta_deficit},
        discord_warnings + deficit_warnings,
    )


def _check_invariance(
    spec: BasisSpec, label: str, reference: Dict[str, float], other: Dict[str, float], tol: float
) -> None:
    for key, expected in reference.items():
        if abs(other[key] - expected) > tol:
            raise InvarianceError(
                f"{key} of {spec.name} differs between states 0...0 and {label}: "
                f"{expected!r} vs {other[key]!r}"
            )


def basis_report(
    spec: BasisSpec,
    cfg: Optional[MeasureConfig] = None,
    include_optimized: bool = True,
    basis: Optional[EntangledBasis] = None,
) -> CorrelationReport:
    """Every measure on the all-zeros state, checked against a few other basis states."""

    cfg = cfg or MeasureConfig()
    basis = basis or generate_basis(spec)
    labels = all_labels(spec.n)
    reference_state = basis.state(labels[0])
    closed = closed_form_measures(reference_state, cfg)
    optimized: Dict[str, float] = {}
    warnings: List[str] = []
    if include_optimized:
        optimized, warnings = optimized_measures(reference_state, cfg)

    rng = np.random.default_rng(cfg.invariance_seed)
    count = min(cfg.invariance_samples, len(labels) - 1)
    for index in sorted(rng.choice(np.arange(1, len(labels)), size=count, replace=False)):
        label = labels[int(index)]
        state = basis.state(label)
        _check_invariance(spec, label, closed, closed_form_measures(state, cfg), CLOSED_FORM_TOL)
        if include_optimized:
            _check_invariance(spec, label, optimized, optimized_measures(state, cfg)[0], OPTIMIZED_TOL)

    logger.debug("Computed correlation report", extra={"spec": spec.name, "warnings": len(warnings)})
    return CorrelationReport(
        spec=spec,
        warnings=warnings,
        conventions=cfg.conventions(),
        **closed,
        **optimized,
    )


__all__ = [
    "AvgEntropyConvention",
    "CorrelationError",
    "InvarianceError",
    "Measure",
    "avg_entanglement_entropy",
    "basis_report",
    "closed_form_measures",
    "concurrence_pure_1_rest",
    "cut_spectra",
    "cut_subsets",
    "deficit_search",
    "discord_search",
    "entanglement_of_formation",
    "eof_from_concurrence",
    "ggm",
    "log_negativity_pure",
    "monogamy_score",
    "negativity_partial_transpose",
    "negativity_pure",
    "one_way_work_deficit",
    "optimized_measures",
    "pair_marginal",
    "quantum_discord",
]

"""Property suites run by ``bell-bases verify``."""
from __future__ import annotations

import logging
import time
from typing import Callable, Iterator, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from .basisgen import (
    BasisGenerationError,
    all_labels,
    bell_basis,
    braid_basis_set,
    check_orthonormal,
    equivalence_up_to_sign_and_relabeling,
    generate_basis,
    generate_state,
    graph_basis,
)
from .correlations import CorrelationError, basis_report, concurrence_pure_1_rest, ggm
from .gates import H, Z, apply_phase, apply_single
from .models import BasisSpec, ControlledFamily, MeasureConfig, PhaseId, valid_phases
from .qcore import QuantumError, StateVector, partial_trace
from .sweep import correlation_table_keys

logger = logging.getLogger(__name__)

PROPOSITION_TOL = 1e-10
GGM_TOL = 1e-10
IDENTITY_TOL = 1e-12


class VerifyOptions(BaseModel):
    n_max: int = 5
    sweep_max_n: Optional[int] = None
    skip_optimized: bool = False
    inject_fault: bool = False
    measure: MeasureConfig = Field(default_factory=MeasureConfig)

    @property
    def proposition_max_n(self) -> int:
        return self.sweep_max_n or max(self.n_max, 6)


class SuiteResult(BaseModel):
    name: str
    passed: bool
    checks: int
    failures: List[str] = Field(default_factory=list)
    elapsed: float = 0.0

    def summary(self, timed: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.checks} checks, {len(self.failures)} failures"
        return f"{line}, {self.elapsed:.2f}s" if timed else line

    def to_dict(self) -> dict:
        """Stable payload for stdout; timings stay on stderr."""

        return self.model_dump(exclude={"elapsed"})


def iter_specs(n_max: int, families=tuple(ControlledFamily), n_min: int = 2) -> Iterator[BasisSpec]:
    """Every generable spec with ``n_min <= n <= n_max`` and ``m < n``."""

    for n in range(n_min, n_max + 1):
        for m in range(1, n):
            for family in families:
                if family is ControlledFamily.AQ and m < 2:
                    continue
                for phase in valid_phases(m):
                    yield BasisSpec(n=n, m=m, family=family, phase=phase)


class _Suite:
    def __init__(self, name: str) -> None:
        self.name = name
        self.checks = 0
        self.failures: List[str] = []

    def check(self, condition: bool, message: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(message)


def _with_fault(states: List[StateVector]) -> List[StateVector]:
    first = states[0]
    amplitudes = np.array(first.amplitudes)
    amplitudes[first.support()[0]] *= -1
    return [StateVector(n_qubits=first.n_qubits, amplitudes=amplitudes)] + states[1:]


def suite_orthonormality(options: VerifyOptions, suite: _Suite) -> None:
    faulted = False
    for spec in iter_specs(options.n_max):
        try:
            basis = generate_basis(spec)
        except BasisGenerationError as exc:
            suite.check(False, str(exc))
            continue
        states = [basis.states[label] for label in basis.labels()]
        if options.inject_fault and not faulted:
            states = _with_fault(states)
            faulted = True
        result = check_orthonormal(states)
        suite.check(result.passed, f"{spec.name}: max deviation {result.max_deviation:.3e}")


def suite_proposition(options: VerifyOptions, suite: _Suite) -> None:
    half = np.eye(2) / 2
    for spec in iter_specs(options.proposition_max_n, families=(ControlledFamily.O1,)):
        for label in all_labels(spec.n):
            state = generate_state(spec, label)
            concurrence = concurrence_pure_1_rest(state)
            rho = partial_trace(state, [1]).entries
            suite.check(
                abs(concurrence - 1.0) <= PROPOSITION_TOL
                and np.allclose(rho, half, rtol=0.0, atol=PROPOSITION_TOL),
                f"{spec.name} label {label}: C={concurrence!r}",
            )


def suite_ggm_scaling(options: VerifyOptions, suite: _Suite) -> None:
    for key in correlation_table_keys(3, max(options.n_max, 3)):
        for family, exponent in ((ControlledFamily.AQ, key.m - 1), (ControlledFamily.A1, key.m)):
            if family is ControlledFamily.AQ and key.m < 2:
                continue
            spec = BasisSpec(n=key.n, m=key.m, family=family, phase=key.phase)
            value = ggm(generate_state(spec, "0" * spec.n))
            expected = min(0.5, 2.0**-exponent)
            suite.check(abs(value - expected) <= GGM_TOL, f"{spec.name}: GGM {value!r} != {expected!r}")


def suite_measure_invariance(options: VerifyOptions, suite: _Suite) -> None:
    for key in correlation_table_keys(3, max(options.n_max, 3)):
        for family in ControlledFamily:
            if family is ControlledFamily.AQ and key.m < 2:
                continue
            spec = BasisSpec(n=key.n, m=key.m, family=family, phase=key.phase)
            optimized = not options.skip_optimized and family is ControlledFamily.O1
            try:
                basis_report(spec, options.measure, include_optimized=optimized)
                suite.check(True, "")
            except CorrelationError as exc:
                suite.check(False, str(exc))


def suite_commutation(options: VerifyOptions, suite: _Suite) -> None:
    for spec in iter_specs(options.n_max):
        for label in all_labels(spec.n):
            forward = generate_state(spec, label)
            reordered = generate_state(spec, label, phase_first=True)
            suite.check(
                np.array_equal(forward.amplitudes, reordered.amplitudes),
                f"{spec.name} label {label}: steps do not commute",
            )


def suite_phase_involution(options: VerifyOptions, suite: _Suite) -> None:
    for m in range(1, options.n_max + 1):
        state = StateVector.computational("0" * m)
        for qubit in range(1, m + 1):
            state = apply_single(state, H, qubit)
        controls = list(range(1, m + 1))
        for phase in valid_phases(m):
            twice = apply_phase(apply_phase(state, phase, controls), phase, controls)
            suite.check(
                np.array_equal(twice.amplitudes, state.amplitudes),
                f"{phase} on m={m} is not an involution",
            )


def suite_p2_pz(options: VerifyOptions, suite: _Suite) -> None:
    for n in range(3, options.n_max + 1):
        for family in ControlledFamily:
            p2 = BasisSpec(n=n, m=2, family=family, phase=PhaseId(p=2))
            pz = BasisSpec(n=n, m=2, family=family, phase=PhaseId.z())
            for label in all_labels(n):
                suite.check(
                    np.array_equal(generate_state(p2, label).amplitudes, generate_state(pz, label).amplitudes),
                    f"{p2.name} and {pz.name} differ on label {label}",
                )


def suite_braid_equivalence(options: VerifyOptions, suite: _Suite) -> None:
    for n in range(3, max(options.n_max, 4) + 1):
        spec = BasisSpec(n=n, m=n - 1, family=ControlledFamily.O1, phase=PhaseId(p=2))
        report = equivalence_up_to_sign_and_relabeling(generate_basis(spec), braid_basis_set(n))
        if n <= 4:
            suite.check(report.matched, f"{spec.name} vs braid: first mismatch {report.first_mismatch}")
        else:
            logger.info(
                "Braid equivalence beyond four qubits",
                extra={"n": n, "matched": report.matched, "first_mismatch": report.first_mismatch},
            )


def suite_special_identities(options: VerifyOptions, suite: _Suite) -> None:
    for n in range(2, options.n_max + 1):
        spec = BasisSpec(n=n, m=1, family=ControlledFamily.A1, phase=PhaseId(p=0))
        graph = BasisSpec(n=n, m=n, family=ControlledFamily.A1, phase=PhaseId.z())
        for label in all_labels(n):
            suite.check(
                bell_basis(n, label).allclose(generate_state(spec, label), IDENTITY_TOL),
                f"Bell state {label} differs from {spec.name}",
            )
            suite.check(
                graph_basis(n, label).allclose(generate_state(graph, label), IDENTITY_TOL),
                f"graph state {label} differs from {graph.name}",
            )
    bell = bell_basis(2, "00")
    rotated = apply_single(apply_single(apply_single(bell, Z, 1), H, 2), Z, 2)
    suite.check(
        rotated.allclose(graph_basis(2, "11"), IDENTITY_TOL),
        "(Z x ZH)|B00> differs from |G11>",
    )


SUITES: List[tuple] = [
    ("orthonormality", suite_orthonormality),
    ("proposition", suite_proposition),
    ("ggm_scaling", suite_ggm_scaling),
    ("measure_invariance", suite_measure_invariance),
    ("commutation", suite_commutation),
    ("phase_involution", suite_phase_involution),
    ("p2_pz", suite_p2_pz),
    ("braid_equivalence", suite_braid_equivalence),
    ("special_identities", suite_special_identities),
]


def run_suite(name: str, body: Callable[[VerifyOptions, _Suite], None], options: VerifyOptions) -> SuiteResult:
    suite = _Suite(name)
    started = time.perf_counter()
    try:
        body(options, suite)
    except QuantumError as exc:
        suite.check(False, f"{type(exc).__name__}: {exc}")
    result = SuiteResult(
        name=name,
        passed=not suite.failures,
        checks=suite.checks,
        failures=suite.failures,
        elapsed=time.perf_counter() - started,
    )
    if result.passed:
        logger.info("Suite passed", extra={"suite": name, "checks": result.checks, "elapsed": result.elapsed})
    else:
        logger.error("Suite failed", extra={"suite": name, "failures": result.failures[:5]})
    return result


def run_verify(options: Optional[VerifyOptions] = None, only: Optional[List[str]] = None) -> List[SuiteResult]:
    options = options or VerifyOptions()
    return [run_suite(name, body, options) for name, body in SUITES if not only or name in only]


__all__ = [
    "SUITES",
    "SuiteResult",
    "VerifyOptions",
    "iter_specs",
    "run_suite",
    "run_verify",
]

"""Pydantic models used across the Bell-like basis toolkit."""
from __future__ import annotations

import math
import re
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .qcore import MAX_QUBITS, StateVector

_PHASE_PATTERN = re.compile(r"^P?(\d+|z)$", re.IGNORECASE)


class ControlledFamily(str, Enum):
    """Working principle of the controlled-U step."""

    A1 = "A1"
    O1 = "O1"
    AQ = "AQ"

    @classmethod
    def parse(cls, value: Union[str, "ControlledFamily"]) -> "ControlledFamily":
        if isinstance(value, ControlledFamily):
            return value
        token = str(value).strip().upper()
        if token.startswith("C") and token[1:] in cls.__members__:
            token = token[1:]
        aliases = {"ALL1": "A1", "ODD1": "O1", "ALLQ": "AQ", "ALLEQUAL": "AQ"}
        token = aliases.get(token, token)
        try:
            return cls(token)
        except ValueError as exc:
            raise ValueError(f"unknown controlled family {value!r}; expected A1, O1 or AQ") from exc

    @property
    def label(self) -> str:
        return f"C{self.value}"


class PhaseId(BaseModel):
    """Phase operation on the control register: ``Pp`` for an integer ``p`` or ``Pz``."""

    model_config = ConfigDict(frozen=True)

    p: Optional[int] = None

    @field_validator("p")
    @classmethod
    def _non_negative(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 0:
            raise ValueError(f"phase parameter must be non-negative, got {value}")
        return value

    @classmethod
    def parse(cls, value: Union[str, int, "PhaseId"]) -> "PhaseId":
        if isinstance(value, PhaseId):
            return value
        if isinstance(value, int):
            return cls(p=value)
        match = _PHASE_PATTERN.match(str(value).strip())
        if not match:
            raise ValueError(f"unknown phase {value!r}; expected P0..Pm or Pz")
        token = match.group(1)
        return cls(p=None) if token.lower() == "z" else cls(p=int(token))

    @classmethod
    def z(cls) -> "PhaseId":
        return cls(p=None)

    @property
    def is_z(self) -> bool:
        return self.p is None

    def check_for(self, m: int) -> "PhaseId":
        if self.p is not None and self.p > m:
            raise ValueError(f"phase {self} needs p <= m (m={m})")
        return self

    def __str__(self) -> str:
        return "Pz" if self.p is None else f"P{self.p}"


def valid_phases(m: int) -> List[PhaseId]:
    """Every phase id accepted for ``m`` control qubits, in ``P0..Pm, Pz`` order."""

    return [PhaseId(p=p) for p in range(m + 1)] + [PhaseId.z()]


class BasisSpec(BaseModel):
    """The ``(n, m, Cq, Pp)`` name of a Bell-like basis."""

    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    family: ControlledFamily
    phase: PhaseId

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, value: Any) -> ControlledFamily:
        return ControlledFamily.parse(value)

    @field_validator("phase", mode="before")
    @classmethod
    def _parse_phase(cls, value: Any) -> Any:
        if isinstance(value, dict):
            return value
        return PhaseId.parse(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "BasisSpec":
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n must lie in 1..{MAX_QUBITS}, got {self.n}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"m must satisfy 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.m == self.n and not self.phase.is_z:
            raise ValueError("m = n is reserved for the graph construction with phase Pz")
        if self.family is ControlledFamily.AQ and self.m < 2:
            raise ValueError("the all-equal family needs at least 2 control qubits")
        self.phase.check_for(self.m)
        return self

    @classmethod
    def of(
        cls,
        n: int,
        m: int,
        family: Union[str, ControlledFamily],
        phase: Union[str, int, PhaseId],
    ) -> "BasisSpec":
        return cls(n=n, m=m, family=family, phase=phase)

    @property
    def name(self) -> str:
        return f"({self.n},{self.m},{self.family.label},{self.phase})"

    @property
    def controls(self) -> Tuple[int, ...]:
        return tuple(range(1, self.m + 1))

    @property
    def targets(self) -> Tuple[int, ...]:
        return tuple(range(self.m + 1, self.n + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "family": self.family.value,
            "phase": str(self.phase),
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "BasisSpec":
        return cls(
            n=payload["n"], m=payload["m"], family=payload["family"], phase=payload["phase"]
        )

    def __str__(self) -> str:
        return self.name


def _label_width(labels: Sequence[str]) -> int:
    widths = {len(label) for label in labels}
    if len(widths) != 1:
        raise ValueError(f"labels must share one width, got widths {sorted(widths)}")
    return widths.pop()


class EntangledBasis(BaseModel):
    """The 2^n labelled states produced from the computational basis."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    n_qubits: int
    states: Dict[str, StateVector]
    spec: Optional[BasisSpec] = None

    @model_validator(mode="after")
    def _check_labels(self) -> "EntangledBasis":
        if len(self.states) != 2**self.n_qubits:
            raise ValueError(
                f"a basis of {self.n_qubits} qubits needs {2**self.n_qubits} states, "
                f"got {len(self.states)}"
            )
        if _label_width(list(self.states)) != self.n_qubits:
            raise ValueError("state labels must be n-bit strings")
        for label, state in self.states.items():
            if state.n_qubits != self.n_qubits:
                raise ValueError(f"state {label} has {state.n_qubits} qubits")
        return self

    def labels(self) -> List[str]:
        return list(self.states)

    def state(self, label: str) -> StateVector:
        return self.states[label]

    def matrix(self) -> np.ndarray:
        """Rows are the basis states in label order."""

        return np.vstack([state.amplitudes for state in self.states.values()])

    def to_dict(self, flat: bool = True) -> Dict[str, Any]:
        """Serialise to the JSON layout: symbolic terms plus an optional flat amplitude array."""

        states: List[Dict[str, Any]] = []
        for label, state in self.states.items():
            entry: Dict[str, Any] = {"label": label, "terms": state_terms(state)}
            if flat:
                entry["amplitudes"] = [[float(a.real), float(a.imag)] for a in state.amplitudes]
            states.append(entry)
        return {
            "name": self.name,
            "n": self.n_qubits,
            "spec": self.spec.to_dict() if self.spec is not None else None,
            "states": states,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "EntangledBasis":
        n_qubits = int(payload["n"])
        states: Dict[str, StateVector] = {}
        for entry in payload["states"]:
            if "amplitudes" in entry:
                amplitudes = np.array([complex(re_, im_) for re_, im_ in entry["amplitudes"]])
            else:
                amplitudes = np.zeros(2**n_qubits, dtype=complex)
                for term in entry["terms"]:
                    amplitudes[int(term["index"], 2)] = term["sign"] / math.sqrt(
                        2 ** _scale_exponent(term["scale"])
                    )
            states[entry["label"]] = StateVector(n_qubits=n_qubits, amplitudes=amplitudes)
        spec_payload = payload.get("spec")
        return cls(
            name=payload.get("name", ""),
            n_qubits=n_qubits,
            states=states,
            spec=BasisSpec.from_dict(spec_payload) if spec_payload else None,
        )


_SCALE_PATTERN = re.compile(r"^1/sqrt\(2\^(\d+)\)$")


def _scale_exponent(scale: str) -> int:
    match = _SCALE_PATTERN.match(scale)
    if not match:
        raise ValueError(f"unsupported amplitude scale {scale!r}")
    return int(match.group(1))


def state_terms(state: StateVector, atol: float = 1e-12) -> List[Dict[str, Any]]:
    """Symbolic ``sign/sqrt(2^k)`` terms of an equal-magnitude real superposition."""

    support = state.support(atol)
    exponent = max(len(support), 1).bit_length() - 1
    scale = f"1/sqrt(2^{exponent})"
    width = state.n_qubits
    return [
        {
            "index": format(index, f"0{width}b"),
            "sign": 1 if state.amplitudes[index].real > 0 else -1,
            "scale": scale,
        }
        for index in support
    ]


class EquivalenceReport(BaseModel):
    """Outcome of matching two bases up to a global sign per state and relabelling."""

    matched: bool
    mapping: Dict[str, Tuple[str, int]] = Field(default_factory=dict)
    first_mismatch: Optional[str] = None
    left_name: str = ""
    right_name: str = ""

    @model_validator(mode="after")
    def _check_mapping(self) -> "EquivalenceReport":
        targets = [target for target, _ in self.mapping.values()]
        if len(set(targets)) != len(targets):
            raise ValueError("equivalence mapping must be injective")
        if any(sign not in (1, -1) for _, sign in self.mapping.values()):
            raise ValueError("equivalence signs must be +1 or -1")
        return self

    @property
    def all_positive(self) -> bool:
        return all(sign == 1 for _, sign in self.mapping.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matched": self.matched,
            "left": self.left_name,
            "right": self.right_name,
            "first_mismatch": self.first_mismatch,
            "mapping": [
                {"label": label, "partner": partner, "sign": sign}
                for label, (partner, sign) in self.mapping.items()
            ],
        }


class MeasureConfig(BaseModel):
    """Settings for the measurement search and the monogamy conventions."""

    model_config = ConfigDict(frozen=True)

    theta_steps: int = 64
    phi_steps: int = 128
    refine_tol: float = 1e-6
    refine_maxiter: int = 400
    refine_restarts: int = 3
    measured_party: int = 1
    monogamy_node: int = 1
    squared_delta_c: bool = False
    invariance_samples: int = 3
    invariance_seed: int = 0

    @model_validator(mode="after")
    def _check_invariants(self) -> "MeasureConfig":
        if self.theta_steps < 16 or self.phi_steps < 32:
            raise ValueError(
                f"measurement grid must be at least (16, 32), got ({self.theta_steps}, {self.phi_steps})"
            )
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")
        if self.refine_maxiter < 1 or self.refine_restarts < 1:
            raise ValueError("refine_maxiter and refine_restarts must be positive")
        if self.measured_party not in (1, 2):
            raise ValueError("measured_party selects a side of a qubit pair: 1 or 2")
        if self.monogamy_node < 1:
            raise ValueError("monogamy_node is a 1-based qubit index")
        if self.invariance_samples < 0:
            raise ValueError("invariance_samples must be non-negative")
        return self

    def conventions(self) -> Dict[str, Any]:
        return {
            "avg_entropy": "subset",
            "negativity": "half concurrence, pure 1:rest cut",
            "monogamy_node": self.monogamy_node,
            "measured_party": "node" if self.measured_party == 1 else "partner",
            "delta_concurrence": "squared" if self.squared_delta_c else "unsquared",
            "optimizer": {
                "grid": [self.theta_steps, self.phi_steps],
                "refine": "nelder-mead",
                "refine_tol": self.refine_tol,
                "refine_maxiter": self.refine_maxiter,
                "refine_restarts": self.refine_restarts,
            },
        }


class CorrelationReport(BaseModel):
    """Every correlation measure for one basis, with the conventions used to compute them."""

    spec: BasisSpec
    ggm: float
    concurrence: float
    avg_entropy: float
    avg_entropy_bipartition: float
    eof: float
    log_negativity: float
    negativity: float
    delta_concurrence: float
    delta_discord: Optional[float] = None
    delta_deficit: Optional[float] = None
    warnings: List[str] = Field(default_factory=list)
    conventions: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_ranges(self) -> "CorrelationReport":
        values = [
            self.ggm,
            self.concurrence,
            self.avg_entropy,
            self.avg_entropy_bipartition,
            self.eof,
            self.log_negativity,
            self.negativity,
            self.delta_concurrence,
        ]
        values += [v for v in (self.delta_discord, self.delta_deficit) if v is not None]
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite measure in report for {self.spec.name}")
        if not -1e-12 <= self.ggm <= 0.5 + 1e-12:
            raise ValueError(f"GGM {self.ggm} outside [0, 0.5]")
        if not -1e-12 <= self.concurrence <= 1.0 + 1e-12:
            raise ValueError(f"concurrence {self.concurrence} outside [0, 1]")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "ggm": self.ggm,
            "concurrence": self.concurrence,
            "avg_entropy": self.avg_entropy,
            "avg_entropy_bipartition": self.avg_entropy_bipartition,
            "eof": self.eof,
            "log_negativity": self.log_negativity,
            "negativity": self.negativity,
            "delta_concurrence": self.delta_concurrence,
            "delta_discord": self.delta_discord,
            "delta_deficit": self.delta_deficit,
            "warnings": list(self.warnings),
            "conventions": dict(self.conventions),
        }


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


__all__ = [
    "BasisSpec",
    "ControlledFamily",
    "CorrelationReport",
    "EntangledBasis",
    "EquivalenceReport",
    "MeasureConfig",
    "OutputFormat",
    "PhaseId",
    "state_terms",
    "valid_phases",
]

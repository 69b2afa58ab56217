"""Bell-like entangled bases built from multiqubit controlled-unitary gates."""
from .basisgen import (
    BasisGenerationError,
    BasisSpecError,
    bell_basis,
    braid_basis,
    braid_basis_set,
    check_orthonormal,
    equivalence_up_to_sign_and_relabeling,
    generate_basis,
    generate_state,
    graph_basis,
)
from .correlations import (
    CorrelationError,
    InvarianceError,
    avg_entanglement_entropy,
    basis_report,
    concurrence_pure_1_rest,
    eof_from_concurrence,
    ggm,
    log_negativity_pure,
    monogamy_score,
    one_way_work_deficit,
    quantum_discord,
    wootters_concurrence,
)
from .models import (
    BasisSpec,
    ControlledFamily,
    CorrelationReport,
    EntangledBasis,
    EquivalenceReport,
    MeasureConfig,
    OutputFormat,
    PhaseId,
)
from .qcore import DensityMatrix, QuantumError, QubitSubset, StateVector, partial_trace

__all__ = [
    "BasisGenerationError",
    "BasisSpec",
    "BasisSpecError",
    "ControlledFamily",
    "CorrelationError",
    "CorrelationReport",
    "DensityMatrix",
    "EntangledBasis",
    "EquivalenceReport",
    "InvarianceError",
    "MeasureConfig",
    "OutputFormat",
    "PhaseId",
    "QuantumError",
    "QubitSubset",
    "StateVector",
    "avg_entanglement_entropy",
    "basis_report",
    "bell_basis",
    "braid_basis",
    "braid_basis_set",
    "check_orthonormal",
    "concurrence_pure_1_rest",
    "eof_from_concurrence",
    "equivalence_up_to_sign_and_relabeling",
    "generate_basis",
    "generate_state",
    "ggm",
    "graph_basis",
    "log_negativity_pure",
    "monogamy_score",
    "one_way_work_deficit",
    "partial_trace",
    "quantum_discord",
    "wootters_concurrence",
]

"""Enumeration of correlation-table rows and their parallel evaluation."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Dict, Iterable, List, NamedTuple, Optional

from pydantic import BaseModel, Field

from .correlations import basis_report
from .models import BasisSpec, ControlledFamily, CorrelationReport, MeasureConfig, PhaseId, valid_phases

logger = logging.getLogger(__name__)

# column order of the correlation table
FAMILY_COLUMNS = (ControlledFamily.O1, ControlledFamily.AQ, ControlledFamily.A1)


class RowKey(NamedTuple):
    n: int
    m: int
    phase: PhaseId
    generic_n: bool = False


class TableRow(BaseModel):
    """One ``(n, m, Pp)`` row with a report per controlled family; ``None`` marks NA."""

    n: int
    m: int
    phase: PhaseId
    generic_n: bool = False
    reports: Dict[ControlledFamily, Optional[CorrelationReport]] = Field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def label(self) -> str:
        n = "n" if self.generic_n else str(self.n)
        return f"({n},{self.m},{self.phase})"

    @property
    def warnings(self) -> List[str]:
        return [
            f"{family.label}: {message}"
            for family, report in self.reports.items()
            if report is not None
            for message in report.warnings
        ]


def table_phases(m: int, all_phases: bool = False) -> List[PhaseId]:
    """Phases tabulated for ``m`` controls: P0 alone, then P0 P2, then P0 P2..Pm Pz."""

    if all_phases:
        return valid_phases(m)
    if m == 1:
        return [PhaseId(p=0)]
    phases = [PhaseId(p=0)] + [PhaseId(p=p) for p in range(2, m + 1)]
    if m >= 3:
        phases.append(PhaseId.z())
    return phases


def correlation_table_keys(n_min: int = 3, n_max: int = 5, all_phases: bool = False) -> List[RowKey]:
    """Row keys in table order; the ``m = 1`` row is computed once at ``n_min`` and stands for every n."""

    if n_min < 3:
        raise ValueError(f"table rows need n >= 3, got n_min={n_min}")
    keys: List[RowKey] = []
    for n in range(n_min, n_max + 1):
        for m in range(1, n):
            if m == 1 and n != n_min and not all_phases:
                continue
            generic = m == 1 and not all_phases
            keys.extend(RowKey(n, m, phase, generic) for phase in table_phases(m, all_phases))
    return keys


def compute_row(key: RowKey, cfg: MeasureConfig, include_optimized: bool = True) -> TableRow:
    """Reports for every family of one row; the optimised scores are computed for CO1 only."""

    started = time.perf_counter()
    reports: Dict[ControlledFamily, Optional[CorrelationReport]] = {}
    for family in FAMILY_COLUMNS:
        if family is ControlledFamily.AQ and key.m < 2:
            reports[family] = None
            continue
        spec = BasisSpec(n=key.n, m=key.m, family=family, phase=key.phase)
        reports[family] = basis_report(
            spec, cfg, include_optimized=include_optimized and family is ControlledFamily.O1
        )
    row = TableRow(
        n=key.n,
        m=key.m,
        phase=key.phase,
        generic_n=key.generic_n,
        reports=reports,
        elapsed=time.perf_counter() - started,
    )
    logger.info("Computed table row", extra={"row": row.label, "elapsed": row.elapsed})
    return row


def run_sweep(
    keys: Iterable[RowKey],
    cfg: Optional[MeasureConfig] = None,
    workers: int = 1,
    include_optimized: bool = True,
) -> List[TableRow]:
    """Evaluate rows in a process pool; results come back in key order."""

    worker = partial(compute_row, cfg=cfg or MeasureConfig(), include_optimized=include_optimized)
    ordered = list(keys)
    if workers <= 1:
        return [worker(key) for key in ordered]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, ordered))


__all__ = [
    "FAMILY_COLUMNS",
    "RowKey",
    "TableRow",
    "compute_row",
    "correlation_table_keys",
    "run_sweep",
    "table_phases",
]

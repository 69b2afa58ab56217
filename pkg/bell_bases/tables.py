"""Renderers for bases, equivalence mappings and correlation tables."""
from __future__ import annotations

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .models import ControlledFamily, EntangledBasis, EquivalenceReport, OutputFormat
from .qcore import StateVector
from .sweep import FAMILY_COLUMNS, TableRow

TERM_TOL = 1e-12
CSV_COLUMNS = [
    "n",
    "m",
    "phase",
    "family",
    "ggm",
    "concurrence",
    "avg_entropy",
    "eof",
    "log_negativity",
    "delta_c",
    "delta_d",
    "delta_deficit",
    "warnings",
]


def format_number(value: Optional[float]) -> str:
    """Six significant digits with trailing zeros trimmed; ``NA`` for missing values."""

    if value is None:
        return "NA"
    return f"{value + 0.0:.6g}"


def ket(index: int, n_qubits: int) -> str:
    return f"|{index:0{n_qubits}b}⟩"


def ket_string(state: StateVector, normalized: bool = False) -> str:
    """Signed term list such as ``|000⟩+|011⟩-|101⟩``; coefficients appear when ``normalized``."""

    parts: List[str] = []
    for index in state.support(TERM_TOL):
        amplitude = state.amplitudes[index]
        real = float(np.real(amplitude))
        sign = "-" if real < 0 else "+"
        coefficient = f"{abs(amplitude):.6g}" if normalized else ""
        term = f"{coefficient}{ket(index, state.n_qubits)}"
        if not parts:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f"{sign}{term}")
    return "".join(parts)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _markdown(header: Sequence[str], rows: Iterable[Sequence[Any]], title: Optional[str] = None) -> str:
    lines: List[str] = []
    if title:
        lines += [f"### {title}", ""]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines += ["| " + " | ".join(str(cell) for cell in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _json(payload: Any, pretty: bool) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2 if pretty else None) + "\n"


def render_basis(
    basis: EntangledBasis, fmt: OutputFormat, normalized: bool = False, pretty: bool = False
) -> str:
    if fmt is OutputFormat.JSON:
        return _json(basis.to_dict(), pretty)
    rows = [(label, ket_string(basis.states[label], normalized)) for label in basis.labels()]
    if fmt is OutputFormat.CSV:
        return _csv_text(["label", "state"], rows)
    return _markdown(["Label", "State"], rows, title=basis.name)


def _signed_label(partner: str, sign: int) -> str:
    return partner if sign > 0 else f"-{partner}"


def render_equivalence(
    report: EquivalenceReport,
    fmt: OutputFormat,
    left: Optional[EntangledBasis] = None,
    extra_columns: Optional[Dict[str, Dict[str, str]]] = None,
    pretty: bool = False,
) -> str:
    """Label mapping in the layout of a comparison table: left label, extra columns, signed partner, state."""

    if fmt is OutputFormat.JSON:
        payload = report.to_dict()
        if extra_columns:
            payload["columns"] = extra_columns
        return _json(payload, pretty)
    extra_columns = extra_columns or {}
    header = [report.left_name or "left", *extra_columns, report.right_name or "right"]
    if left is not None:
        header.append("State")
    rows = []
    for label, (partner, sign) in report.mapping.items():
        row = [label, *(column[label] for column in extra_columns.values()), _signed_label(partner, sign)]
        if left is not None:
            row.append(ket_string(left.states[label]))
        rows.append(row)
    if fmt is OutputFormat.CSV:
        return _csv_text(header, rows)
    status = "matched" if report.matched else f"not matched (first mismatch: {report.first_mismatch})"
    return _markdown(header, rows, title=f"{report.left_name} vs {report.right_name}: {status}")


def _report_value(row: TableRow, family: ControlledFamily, field: str) -> Optional[float]:
    report = row.reports.get(family)
    return None if report is None else getattr(report, field)


def _csv_rows(rows: Sequence[TableRow]) -> List[List[Any]]:
    records = []
    for row in rows:
        for family in FAMILY_COLUMNS:
            report = row.reports.get(family)
            if report is None:
                continue
            records.append(
                [
                    "n" if row.generic_n else row.n,
                    row.m,
                    str(row.phase),
                    family.label,
                    format_number(report.ggm),
                    format_number(report.concurrence),
                    format_number(report.avg_entropy),
                    format_number(report.eof),
                    format_number(report.log_negativity),
                    format_number(report.delta_concurrence),
                    format_number(report.delta_discord),
                    format_number(report.delta_deficit),
                    "; ".join(report.warnings),
                ]
            )
    return records


def render_correlation_table(rows: Sequence[TableRow], fmt: OutputFormat, pretty: bool = False) -> str:
    if fmt is OutputFormat.JSON:
        payload = [
            {
                "row": row.label,
                "n": row.n,
                "m": row.m,
                "phase": str(row.phase),
                "reports": {
                    family.label: (None if report is None else report.to_dict())
                    for family, report in row.reports.items()
                },
            }
            for row in rows
        ]
        return _json(payload, pretty)
    if fmt is OutputFormat.CSV:
        return _csv_text(CSV_COLUMNS, _csv_rows(rows))

    labels = [family.label for family in FAMILY_COLUMNS]
    header = (
        ["(n,m,Pp)"]
        + [f"ξ {label}" for label in labels]
        + [f"C {label}" for label in labels]
        + [f"⟨S⟩ {label}" for label in labels]
        + ["δ_C CO1", "δ_D CO1"]
    )
    body = []
    for row in rows:
        cells = [row.label]
        for field in ("ggm", "concurrence", "avg_entropy"):
            cells += [format_number(_report_value(row, family, field)) for family in FAMILY_COLUMNS]
        cells.append(format_number(_report_value(row, ControlledFamily.O1, "delta_concurrence")))
        cells.append(format_number(_report_value(row, ControlledFamily.O1, "delta_discord")))
        body.append(cells)
    return _markdown(header, body)


__all__ = [
    "CSV_COLUMNS",
    "format_number",
    "ket",
    "ket_string",
    "render_basis",
    "render_correlation_table",
    "render_equivalence",
]

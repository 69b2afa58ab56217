"""Command line interface for the Bell-like basis toolkit."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from pydantic import ValidationError

from .basisgen import (
    BasisSpecError,
    braid_basis_set,
    equivalence_up_to_sign_and_relabeling,
    generate_basis,
)
from .config import ConfigError, RunConfig, load_run_config
from .correlations import basis_report
from .models import BasisSpec, ControlledFamily, EntangledBasis, EquivalenceReport, OutputFormat, PhaseId
from .qcore import QuantumError
from .sweep import RowKey, TableRow, compute_row, correlation_table_keys, run_sweep
from .tables import render_basis, render_correlation_table, render_equivalence
from .verify import SUITES, VerifyOptions, run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def configure_logging(verbosity: int) -> None:
    """Configure logging based on the ``-v`` flag count."""

    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[fmt.value for fmt in OutputFormat], help="Output format (default json)")
    parser.add_argument("--out", help="Output file path (stdout when omitted)")
    parser.add_argument("--config", help="KEY=VALUE config file (defaults to $BELL_BASES_CONFIG)")
    parser.add_argument("--pretty", action="store_true", help="Pretty-print JSON output")


def _add_spec_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="Number of qubits")
    parser.add_argument("--m", type=int, help="Number of control qubits")
    parser.add_argument("--family", help="Controlled family: A1, O1 or AQ")
    parser.add_argument("--phase", help="Phase operation: P0..Pm or Pz")


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Bell-like basis generation and correlation tables")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="increase logging verbosity")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate_parser = subparsers.add_parser("generate", help="Generate a labelled Bell-like basis")
    _add_spec_options(generate_parser)
    generate_parser.add_argument(
        "--normalized",
        action="store_true",
        default=None,
        help="Show term coefficients instead of unnormalised sign lists",
    )
    _add_output_options(generate_parser)
    generate_parser.set_defaults(func=handle_generate)

    measure_parser = subparsers.add_parser("measure", help="Compute correlation-table rows")
    _add_spec_options(measure_parser)
    measure_parser.add_argument("--n-min", type=int, help="Smallest n of the sweep")
    measure_parser.add_argument("--n-max", type=int, help="Largest n of the sweep")
    measure_parser.add_argument("--all-phases", action="store_true", help="Sweep every valid phase, not only the tabulated ones")
    measure_parser.add_argument("--skip-optimized", action="store_true", help="Skip discord and work-deficit scores")
    measure_parser.add_argument("--workers", type=int, help="Worker processes for the sweep")
    measure_parser.add_argument("--theta-steps", type=int, help="Measurement grid steps in theta")
    measure_parser.add_argument("--phi-steps", type=int, help="Measurement grid steps in phi")
    measure_parser.add_argument("--refine-tol", type=float, help="Angle tolerance of the local refinement")
    measure_parser.add_argument("--measured-party", type=int, choices=(1, 2), help="Measured side of each qubit pair")
    measure_parser.add_argument("--monogamy-node", type=int, help="Node qubit of the monogamy scores")
    measure_parser.add_argument(
        "--squared-delta-c", action="store_true", default=None, help="Use squared concurrences in the monogamy score"
    )
    measure_parser.add_argument("--seed", type=int, help="Recorded for reproducibility; results are deterministic")
    _add_output_options(measure_parser)
    measure_parser.set_defaults(func=handle_measure)

    braid_parser = subparsers.add_parser("compare-braid", help="Compare (n,n-1,CO1,P2) with the braid basis")
    braid_parser.add_argument("--n", type=int, help="Number of qubits (at least 3)")
    braid_parser.add_argument(
        "--with-caq", action="store_true", help="Add the (n,n-1,CAQ,P2) label of every CO1 state"
    )
    _add_output_options(braid_parser)
    braid_parser.set_defaults(func=handle_compare_braid)

    verify_parser = subparsers.add_parser("verify", help="Run the property suites")
    verify_parser.add_argument("--n-max", type=int, default=5, help="Largest n for the general suites")
    verify_parser.add_argument("--sweep-max-n", type=int, help="Largest n of the concurrence sweep (default 6)")
    verify_parser.add_argument("--skip-optimized", action="store_true", help="Skip discord and work-deficit checks")
    verify_parser.add_argument(
        "--inject-fault", action="store_true", help="Flip one amplitude sign so the orthonormality suite must fail"
    )
    verify_parser.add_argument("--only", nargs="*", choices=[name for name, _ in SUITES], help="Suites to run")
    _add_output_options(verify_parser)
    verify_parser.set_defaults(func=handle_verify)

    return parser.parse_args(argv)


def _run_config(args: argparse.Namespace, **extra: Any) -> RunConfig:
    overrides: Dict[str, Any] = {
        "n": getattr(args, "n", None),
        "m": getattr(args, "m", None),
        "family": getattr(args, "family", None),
        "phase": getattr(args, "phase", None),
        "format": args.format,
        "out": args.out,
    }
    overrides.update(extra)
    return load_run_config(overrides, args.config)


def _spec(run: RunConfig) -> BasisSpec:
    try:
        return run.spec()
    except ValidationError as exc:
        raise BasisSpecError(f"invalid basis: {exc.errors()[0]['msg']}") from exc


def _write_text(text: str, output_path: Optional[str]) -> None:
    if output_path:
        Path(output_path).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text)


def handle_generate(args: argparse.Namespace) -> int:
    run = _run_config(args, normalized=args.normalized)
    basis = generate_basis(_spec(run))
    _write_text(render_basis(basis, run.format, normalized=run.normalized, pretty=args.pretty), run.out)
    return EXIT_OK


def handle_measure(args: argparse.Namespace) -> int:
    run = _run_config(
        args,
        n_min=args.n_min,
        n_max=args.n_max,
        workers=args.workers,
        theta_steps=args.theta_steps,
        phi_steps=args.phi_steps,
        refine_tol=args.refine_tol,
        measured_party=args.measured_party,
        monogamy_node=args.monogamy_node,
        squared_delta_c=args.squared_delta_c,
        seed=args.seed,
    )
    cfg = run.measure_config()
    include_optimized = not args.skip_optimized
    if run.n is not None and run.n < 3:
        raise BasisSpecError("measure needs --n of at least 3")

    if run.has_spec():
        spec = _spec(run)
        report = basis_report(spec, cfg, include_optimized=include_optimized)
        rows = [TableRow(n=spec.n, m=spec.m, phase=spec.phase, reports={spec.family: report})]
    elif run.n is not None and run.m is not None and run.phase is not None:
        rows = [compute_row(RowKey(run.n, run.m, run.phase), cfg, include_optimized)]
    else:
        keys = correlation_table_keys(run.n_min, run.n_max, all_phases=args.all_phases)
        rows = run_sweep(keys, cfg, workers=run.workers, include_optimized=include_optimized)

    for row in rows:
        for message in row.warnings:
            logger.warning("Optimizer warning", extra={"row": row.label, "detail": message})
            print(f"warning {row.label}: {message}", file=sys.stderr)
    _write_text(render_correlation_table(rows, run.format, pretty=args.pretty), run.out)
    return EXIT_OK


def _caq_column(n: int, co1: EntangledBasis) -> Dict[str, str]:
    caq = generate_basis(BasisSpec(n=n, m=n - 1, family=ControlledFamily.AQ, phase=PhaseId(p=2)))
    mapping = equivalence_up_to_sign_and_relabeling(co1, caq)
    return {
        label: partner if sign > 0 else f"-{partner}"
        for label, (partner, sign) in mapping.mapping.items()
    }


def handle_compare_braid(args: argparse.Namespace) -> int:
    run = _run_config(args)
    if run.n is None or run.n < 3:
        raise BasisSpecError("compare-braid needs --n of at least 3")
    co1 = generate_basis(BasisSpec(n=run.n, m=run.n - 1, family=ControlledFamily.O1, phase=PhaseId(p=2)))
    report: EquivalenceReport = equivalence_up_to_sign_and_relabeling(co1, braid_basis_set(run.n))
    extra = None
    if args.with_caq:
        extra = {f"({run.n},{run.n - 1},CAQ,P2)": _caq_column(run.n, co1)}
    logger.info("Compared with braid basis", extra={"n": run.n, "matched": report.matched})
    _write_text(render_equivalence(report, run.format, left=co1, extra_columns=extra, pretty=args.pretty), run.out)
    if not report.matched:
        print(f"no braid partner for state {report.first_mismatch}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def handle_verify(args: argparse.Namespace) -> int:
    run = _run_config(args)
    options = VerifyOptions(
        n_max=args.n_max,
        sweep_max_n=args.sweep_max_n,
        skip_optimized=args.skip_optimized,
        inject_fault=args.inject_fault,
        measure=run.measure_config(),
    )
    results = run_verify(options, only=args.only)
    for result in results:
        print(result.summary(), file=sys.stderr)
        for failure in result.failures[:10]:
            print(f"  {failure}", file=sys.stderr)
    if run.format is OutputFormat.JSON:
        payload = [result.to_dict() for result in results]
        _write_text(json.dumps(payload, indent=2 if args.pretty else None) + "\n", run.out)
    else:
        lines = [result.summary(timed=False) for result in results]
        _write_text("\n".join(lines) + "\n", run.out)
    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv if argv is not None else sys.argv[1:])
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except (ValidationError, ConfigError, BasisSpecError) as exc:
        logger.error("Usage error", extra={"command": args.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuantumError as exc:
        logger.error("Computation failed", extra={"command": args.command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover - CLI entry point
    raise SystemExit(main())

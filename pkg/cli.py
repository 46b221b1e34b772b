"""
ihara-lab command line.

    python cli.py validate graph.txt
    python cli.py zeta graph.txt --form det|series|euler [--order N]
    python cli.py lambda graph.txt
    python cli.py params graph.txt [--mode strict|relaxed]
    python cli.py entropy graph.txt dist.txt [--a A] [--sigma S] [--mode M] [--normalize]
    python cli.py audit graph.txt
    python cli.py primes graph.txt [--max-len L] [--json]
    python cli.py billiard [--order N]

Global flags go before the subcommand: --config FILE, --tol TOL,
--output json|table|csv, --verbose.
"""

import argparse
import csv
import logging
import sys
from typing import Dict, Iterable, List, Optional, Sequence

from config import LabSettings, load_settings
from entropy import (
    ProbabilityDistribution,
    formal_group_entropy,
    ihara_entropy,
    ihara_generator,
    load_distribution,
    make_params,
    shannon_entropy,
)
from errors import (
    ConfigError,
    DistributionError,
    GraphParseError,
    GraphValidationError,
    IharaLabError,
    ParameterWindowError,
    UnsupportedOrderError,
)
from graph_core import billiard_graph, load_graph, require_valid, validate
from param_solver import MODES, RELAXED, STRICT, audit_inequalities, parameter_window
from schemas import (
    AlphabetSchema,
    AuditReportSchema,
    EntropyResultSchema,
    FactorSchema,
    ParamWindowSchema,
    PolynomialSchema,
    PrimeCycleSchema,
    SeriesSchema,
    SpectralDataSchema,
    ValidationReportSchema,
)
from line_graph import build_alphabet
from symbolic_dynamics import (
    BILLIARD_WALK,
    enumerate_primes,
    euler_product_series,
    factor_block,
    prime_counts_from_traces,
    prime_length_counts,
)
from utils import JSONUtils, LoggingUtils, log_command
from zeta_engine import (
    BILLIARD_FACTOR_COEFFICIENTS,
    BILLIARD_FACTOR_EXPONENT,
    expand_with_exponent,
    perron_root,
    reciprocal_poly,
    sample_grid,
    zeta_series,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CLAIM = 1
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_DISTRIBUTION = 4
EXIT_WINDOW = 5
EXIT_UNSUPPORTED = 6
EXIT_INTERNAL = 70

# Most specific first
ERROR_EXIT_CODES = (
    (GraphParseError, EXIT_PARSE),
    (GraphValidationError, EXIT_CLAIM),
    (DistributionError, EXIT_DISTRIBUTION),
    (ParameterWindowError, EXIT_WINDOW),
    (UnsupportedOrderError, EXIT_UNSUPPORTED),
    (ConfigError, EXIT_IO),
    (OSError, EXIT_IO),
)


def exit_code_for(error: Exception) -> int:
    for error_type, code in ERROR_EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_INTERNAL


# output

def _flatten(payload, prefix: str = "") -> List[tuple]:
    rows = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            rows.extend(_flatten(payload[key], f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(payload, list) and payload and all(isinstance(item, dict) for item in payload):
        for index, item in enumerate(payload):
            rows.extend(_flatten(item, f"{prefix}[{index}]"))
    else:
        rows.append((prefix, payload))
    return rows


def _cell(value) -> str:
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    if isinstance(value, float):
        return JSONUtils.format_float(value)
    return str(value)


def emit(args, kind: str, payload: Dict, rows: Optional[Iterable[Sequence]] = None,
         header: Optional[Sequence[str]] = None) -> None:
    """Write a payload as JSON, an aligned table, or CSV rows"""
    out = args.stdout
    if args.output == "json":
        out.write(JSONUtils.dumps(JSONUtils.envelope(kind, payload)) + "\n")
        return

    if rows is None:
        header = ("key", "value")
        rows = _flatten(payload)
    rows = [tuple(row) for row in rows]

    if args.output == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return

    cells = [tuple(header)] + [tuple(_cell(v) for v in row) for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    for row in cells:
        out.write("  ".join(value.ljust(widths[i]) for i, value in enumerate(row)).rstrip() + "\n")


def _order(requested: Optional[int], default: int) -> int:
    if requested is None:
        return default
    if requested < 1:
        raise UnsupportedOrderError(f"order must be at least 1, got {requested}")
    return requested


def _valid_graph(args):
    g = load_graph(args.graph)
    require_valid(g)
    return g


# commands

@log_command("validate")
def cmd_validate(args, lab: LabSettings) -> int:
    g = load_graph(args.graph)
    report = validate(g)
    emit(args, "validation_report", ValidationReportSchema().dump(report))
    return EXIT_OK if report.passed else EXIT_CLAIM


@log_command("zeta")
def cmd_zeta(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    default = lab.series_order
    if args.form == "euler":
        default = min(default, lab.max_prime_length)
    order = _order(args.order, default)

    if args.output == "csv":
        grid = sample_grid(g, lab.sample_points)
        emit(args, "zeta_grid", {}, rows=grid, header=("x", "zeta", "zeta_prime", "h"))
        return EXIT_OK

    if args.form == "det":
        emit(args, "reciprocal_polynomial", PolynomialSchema().dump(reciprocal_poly(g)))
    elif args.form == "series":
        emit(args, "zeta_series", SeriesSchema().dump(zeta_series(g, order)))
    else:
        if order > lab.max_prime_length:
            raise UnsupportedOrderError(
                f"euler order {order} exceeds max prime length {lab.max_prime_length}")
        primes = enumerate_primes(g, order, lab)
        emit(args, "euler_product", SeriesSchema().dump(euler_product_series(primes, order, order)))
    return EXIT_OK


@log_command("lambda")
def cmd_lambda(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    emit(args, "spectral_data", SpectralDataSchema().dump(perron_root(g, lab)))
    return EXIT_OK


@log_command("params")
def cmd_params(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    window = parameter_window(g, args.mode, lab)
    emit(args, "param_window", ParamWindowSchema().dump(window))
    if args.mode == STRICT and not window.strict_window_nonempty:
        print(f"strict window is empty: x1 = {window.x1!r} >= x0 = {window.x0!r}", file=args.stderr)
        return EXIT_CLAIM
    return EXIT_OK


def _entropy_payload(g, params, P: ProbabilityDistribution) -> Dict:
    return EntropyResultSchema().dump({
        "value": ihara_entropy(g, params, P),
        "formal_group_value": formal_group_entropy(P, ihara_generator(g, params)),
        "shannon": shannon_entropy(P),
        "W": P.W,
        "params": params,
        "window": params.window,
    })


@log_command("entropy")
def cmd_entropy(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    P = load_distribution(args.dist, args.normalize)
    params = make_params(g, args.a, args.sigma, args.mode, lab)
    emit(args, "entropy", _entropy_payload(g, params, P))
    return EXIT_OK


@log_command("audit")
def cmd_audit(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    payload = AuditReportSchema().dump(audit_inequalities(g, lab))
    if args.output == "json":
        emit(args, "audit_report", payload)
    else:
        rows = [(e["claim_id"], e["paper_location"], e["lhs"], e["rhs"],
                 "holds" if e["holds"] else "fails", e["note"])
                for e in payload["entries"]]
        emit(args, "audit_report", payload, rows=rows,
             header=("claim_id", "paper_location", "lhs", "rhs", "result", "note"))
    return EXIT_OK


@log_command("primes")
def cmd_primes(args, lab: LabSettings) -> int:
    g = _valid_graph(args)
    L = _order(args.max_len, lab.max_prime_length)
    primes = enumerate_primes(g, L, lab)
    if args.json:
        args.output = "json"
        emit(args, "prime_cycles", {
            "max_length": L,
            "primes": PrimeCycleSchema(many=True).dump(primes),
        })
        return EXIT_OK
    enumerated = prime_length_counts(primes, L)
    from_traces = prime_counts_from_traces(g, L)
    rows = [(length, enumerated[length], from_traces[length]) for length in range(1, L + 1)]
    emit(args, "prime_counts", {"counts": {str(k): v for k, v in enumerated.items()}},
         rows=rows, header=("length", "enumerated", "from_traces"))
    return EXIT_OK


@log_command("billiard")
def cmd_billiard(args, lab: LabSettings) -> int:
    """validate, zeta, params, entropy and audit on the built-in billiard table"""
    g = billiard_graph()
    report = validate(g)
    polynomial = reciprocal_poly(g)
    expected = expand_with_exponent(BILLIARD_FACTOR_COEFFICIENTS, BILLIARD_FACTOR_EXPONENT)
    matches = (polynomial.coefficients == expected
               and polynomial.det_coefficients == BILLIARD_FACTOR_COEFFICIENTS)

    params = make_params(g, mode=RELAXED, custom_settings=lab)
    alphabet = build_alphabet(g)
    payload = {
        "validation": ValidationReportSchema().dump(report),
        "polynomial": PolynomialSchema().dump(polynomial),
        "polynomial_matches": matches,
        "window": ParamWindowSchema().dump(params.window),
        "entropy_uniform_5": _entropy_payload(g, params, ProbabilityDistribution.uniform(5)),
        "audit": AuditReportSchema().dump(audit_inequalities(g, lab)),
        "alphabet": AlphabetSchema().dump(alphabet),
        "walk_factors": FactorSchema(many=True).dump(factor_block(BILLIARD_WALK, alphabet)),
    }
    if args.order is not None:
        payload["series"] = SeriesSchema().dump(zeta_series(g, _order(args.order, lab.series_order)))

    passed = report.passed and matches
    payload["result"] = "PASS" if passed else "FAIL"
    emit(args, "billiard", payload)
    if args.output != "json":
        args.stdout.write(("✅ PASS" if passed else "❌ FAIL: polynomial differs from the expected one") + "\n")
    return EXIT_OK if passed else EXIT_CLAIM


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ihara-lab", description="Ihara zeta functions, "
                                     "entropy parameters and inequality audits for finite graphs")
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("--tol", type=float, help="bisection tolerance on x (overrides IHARA_LAB_TOL)")
    parser.add_argument("--output", choices=("json", "table", "csv"), default="json")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the standing hypotheses")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("zeta", help="reciprocal polynomial, trace series or Euler product")
    p.add_argument("graph")
    p.add_argument("--form", choices=("det", "series", "euler"), default="det")
    p.add_argument("--order", type=int)
    p.set_defaults(handler=cmd_zeta)

    p = sub.add_parser("lambda", help="Perron root of the Hashimoto matrix")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_lambda)

    p = sub.add_parser("params", help="x0, x1 and the sigma limit")
    p.add_argument("graph")
    p.add_argument("--mode", choices=MODES, default=RELAXED)
    p.set_defaults(handler=cmd_params)

    p = sub.add_parser("entropy", help="Ihara entropy of a distribution")
    p.add_argument("graph")
    p.add_argument("dist")
    p.add_argument("--a", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--mode", choices=MODES, default=RELAXED)
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("audit", help="measure every claimed inequality")
    p.add_argument("graph")
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("primes", help="prime cycle counts per length")
    p.add_argument("graph")
    p.add_argument("--max-len", type=int, dest="max_len")
    p.add_argument("--json", action="store_true", help="export canonical primes as symbol arrays")
    p.set_defaults(handler=cmd_primes)

    p = sub.add_parser("billiard", help="run everything on the built-in billiard table")
    p.add_argument("--order", type=int)
    p.set_defaults(handler=cmd_billiard)
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.stdout = stdout or sys.stdout
    args.stderr = stderr or sys.stderr

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )

    try:
        lab = load_settings(args.config, {"root_tol": args.tol})
        return args.handler(args, lab)
    except (IharaLabError, OSError, ArithmeticError, ValueError) as e:
        code = exit_code_for(e)
        if code == EXIT_INTERNAL:
            LoggingUtils.log_error(e, {"command": args.command})
        print(f"error: {e}", file=args.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())

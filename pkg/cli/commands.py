"""
Command Line Interface
Subcommands: analyze, orbit, xcheck, example, verify.

Exit codes: 0 ok, 1 oracle failure, 2 input error, 3 invariant violation.

Usage:
    python hyponormal_check.py analyze system.json
    python hyponormal_check.py orbit matrix.json --vector 1,1 --steps 20
    python hyponormal_check.py xcheck --seed 42 --count 100
    python hyponormal_check.py example paper-discrete --output discrete.json
    python hyponormal_check.py verify report.json
"""

import argparse
from dataclasses import dataclass
import logging
import math
import sys
import time

from dense.analysis import analyze_operator, not_weakly_hypercyclic_certificate
from dense.matrix_operator import minimal_lambda
from dense.orbit import (auto_growth_constant, growth_certificate, orbit_bound_check,
                         orbit_norms, weakly_closed_orbit_certificate)
from utils.config import QUAD_RULES, build_config
from utils.errors import (ConsistencyError, InputError, OracleDisagreement, PreconditionError,
                          ResolutionError)
from utils.logging_config import setup_logging
from validation.bridge import operator_of_system
from validation.continuous_example import QuadratureGrid, continuous_example_check
from validation.corpus import validate_corpus
from wco.analysis import analyze_system
from .documents import (TOOL_NAME, TOOL_VERSION, continuous_report, corpus_report, dumps,
                        load_json, operator_report, orbit_report, parse_document, parse_vector,
                        report_header, system_report, verify_report)
from .examples import EXAMPLE_NAMES, example_document
from .render import render_text

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

ERROR_TITLES = {
    InputError: "INPUT ERROR",
    PreconditionError: "PRECONDITION ERROR",
    ConsistencyError: "INVARIANT VIOLATION",
    OracleDisagreement: "ORACLE DISAGREEMENT",
    ResolutionError: "RESOLUTION ERROR",
}


@dataclass
class CommandResult:
    """A report to emit and the exit code; raw documents skip rendering"""

    report: dict
    exit_code: int = 0
    raw: bool = False


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="output format (default: text)")
    common.add_argument("--output", metavar="PATH", help="write the output to PATH")
    common.add_argument("--seed", type=int, default=42, help="corpus seed (default: 42)")
    common.add_argument("--support-tol", type=float, help="relative support threshold")
    common.add_argument("--psd-tol", type=float, help="relative PSD tolerance")
    common.add_argument("--quad-tol", type=float, help="quadrature tolerance")
    common.add_argument("--quad-nodes", type=_positive_int, help="quadrature node count")
    common.add_argument("--quad-rule", choices=QUAD_RULES, help="quadrature rule")
    common.add_argument("--max-n", type=_positive_int, help="largest n of the J_n tables")
    common.add_argument("--tail-bound-asserted", action="store_true",
                        help="assert the criterion bound beyond the exact prefix")
    common.add_argument("--log-level", choices=LOG_LEVELS, default="INFO")
    common.add_argument("--log-dir", metavar="DIR", help="also log to a rotating file in DIR")

    parser = argparse.ArgumentParser(
        prog="hyponormal_check",
        description="λ-hyponormality and hypercyclicity certificates for weighted "
                    "composition operators and finite matrices")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common],
                                  help="analyze a system or matrix document")
    analyze.add_argument("input", help="SystemDocument or MatrixDocument (JSON)")

    orbit = commands.add_parser("orbit", parents=[common], help="orbit growth of a vector")
    orbit.add_argument("input", help="SystemDocument or MatrixDocument (JSON)")
    orbit.add_argument("--vector", required=True, help="comma-separated entries, e.g. 1,1 or 1+2j,0")
    orbit.add_argument("--steps", type=_non_negative_int, default=20, help="N (default: 20)")
    orbit.add_argument("--lambda", dest="lam", type=float,
                       help="λ for the growth bound (default: minimal λ)")

    xcheck = commands.add_parser("xcheck", parents=[common], help="validate a random corpus")
    xcheck.add_argument("--count", type=_non_negative_int, default=100,
                        help="number of systems (default: 100)")

    example = commands.add_parser("example", parents=[common], help="built-in examples")
    example.add_argument("name", choices=EXAMPLE_NAMES)
    example.add_argument("--analyze", action="store_true",
                         help="analyze the generated document instead of emitting it")

    verify = commands.add_parser("verify", parents=[common],
                                 help="replay the certificates of a structured report")
    verify.add_argument("report", help="structured report (JSON)")
    return parser


def config_from_args(args, options=None):
    """Defaults < document options < command line flags"""
    overrides = dict(options or {})
    overrides.update({
        "support_tol": args.support_tol,
        "psd_tol": args.psd_tol,
        "quad_tol": args.quad_tol,
        "quad_nodes": args.quad_nodes,
        "quad_rule": args.quad_rule,
        "max_n": args.max_n,
    })
    if args.tail_bound_asserted:
        overrides["tail_bound_asserted"] = True
    return build_config(overrides)


def _analyze_parsed(parsed, args):
    config = config_from_args(args, parsed.options)
    started = time.perf_counter()
    if parsed.kind == "system":
        analysis = analyze_system(parsed.system, config, parsed.evaluation_window)
        return system_report(parsed, analysis, config, time.perf_counter() - started)
    analysis = analyze_operator(parsed.operator, config)
    return operator_report(parsed, analysis, config, time.perf_counter() - started)


def cmd_analyze(args):
    return CommandResult(_analyze_parsed(parse_document(load_json(args.input)), args))


def cmd_orbit(args):
    parsed = parse_document(load_json(args.input))
    config = config_from_args(args, parsed.options)
    started = time.perf_counter()
    operator = parsed.operator if parsed.kind == "matrix" else operator_of_system(parsed.system)
    h = parse_vector(args.vector, operator.dim)
    norms = orbit_norms(operator, h, args.steps)

    lambda_min = minimal_lambda(operator, config)
    lam = lambda_min if args.lam is None else args.lam
    bound_check = None
    if lam == 0.0:
        # zero operator: every λ > 0 works
        lam = 1.0
    if math.isfinite(lam):
        bound_check = orbit_bound_check(operator, h, lam, args.steps, config)
    else:
        logger.warning("No λ exists for this operator; orbit bound not checked")

    certificates = []
    growth_constant = None
    if args.steps >= 1:
        growth_constant = auto_growth_constant(norms[1:])
        growth = growth_certificate(norms[1:], tol=config["orbit_slack"])
        if growth is not None:
            certificates.append(growth)
    closed_orbit = weakly_closed_orbit_certificate(operator, h, config)
    if closed_orbit is not None:
        certificates.append(closed_orbit)
    not_hypercyclic = not_weakly_hypercyclic_certificate(operator, config, lambda_min)
    if not_hypercyclic is not None:
        certificates.append(not_hypercyclic)

    report = orbit_report(parsed, h, args.steps, lam, norms, bound_check, growth_constant,
                          certificates, config, time.perf_counter() - started)
    contradiction = bound_check is not None and bound_check.contradiction
    return CommandResult(report, ConsistencyError.exit_code if contradiction else 0)


def cmd_xcheck(args):
    config = config_from_args(args)
    started = time.perf_counter()
    summary = validate_corpus(args.seed, args.count, config)
    report = corpus_report(summary, config, time.perf_counter() - started)
    return CommandResult(report, 0 if summary.ok else OracleDisagreement.exit_code)


def cmd_example(args):
    document = example_document(args.name, tail_bound_asserted=args.tail_bound_asserted)
    if document is None:
        config = config_from_args(args)
        started = time.perf_counter()
        result = continuous_example_check(QuadratureGrid.from_config(config))
        return CommandResult(continuous_report(result, time.perf_counter() - started))
    if args.analyze:
        return CommandResult(_analyze_parsed(parse_document(document), args))
    return CommandResult(document, raw=True)


def cmd_verify(args):
    source = load_json(args.report)
    outcomes = verify_report(source)
    report = report_header("verify")
    report["source_kind"] = source["kind"]
    report["input_digest"] = source["input_digest"]
    report["certificates"] = [{"certificate": c.to_dict(), "verified": ok} for c, ok in outcomes]
    report["all_verified"] = all(ok for _, ok in outcomes)
    return CommandResult(report, 0 if report["all_verified"] else OracleDisagreement.exit_code)


COMMANDS = {
    "analyze": cmd_analyze,
    "orbit": cmd_orbit,
    "xcheck": cmd_xcheck,
    "example": cmd_example,
    "verify": cmd_verify,
}


def emit(result, args):
    if result.raw or args.format == "structured":
        text = dumps(result.report)
    else:
        text = render_text(result.report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"✓ Output written to {args.output}")
    else:
        sys.stdout.write(text)


def _log_failure(title, error, exc_info=False):
    logger.error("=" * 80)
    logger.error(title)
    logger.error("=" * 80)
    logger.error(f"{error}", exc_info=exc_info)


def main(argv=None):
    """Run one subcommand; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    setup_logging(level=getattr(logging, args.log_level), log_dir=args.log_dir,
                  log_prefix="hyponormal_check")
    try:
        result = COMMANDS[args.command](args)
        emit(result, args)
        return result.exit_code
    except tuple(ERROR_TITLES) as e:
        title = next(t for cls, t in ERROR_TITLES.items() if isinstance(e, cls))
        _log_failure(title, e)
        return e.exit_code
    except Exception as e:
        _log_failure("UNEXPECTED ERROR", e, exc_info=True)
        return 1

"""
Documents and Reports
JSON input documents (systems and matrices), report assembly, and report
replay. Indices in documents and reports are 1-based.

SystemDocument:
    {"masses": [...], "phi": [...], "u": [...],
     "options": {"support_tol": ..., "psd_tol": ..., "max_n": ...,
                 "tail_bound_asserted": false,
                 "window": "exact" | "prefix", "exact_prefix": P}}

MatrixDocument:
    {"dim": d, "entries": [[re, im], ...d² pairs row-major], "masses": [...]}
"""

from dataclasses import dataclass, field
from datetime import datetime
import hashlib
import json
import logging
import math
import numbers

import numpy as np

from certificates.certificate import Certificate, encode_number
from dense.analysis import verify_operator_certificate
from dense.matrix_operator import MatrixOperator
from utils.config import ANALYSIS_CONFIG, build_config
from utils.errors import InputError
from utils.logging_config import UTC
from validation.bridge import operator_of_system
from wco.analysis import verify_system_certificate
from wco.operator import WeightedCompositionSystem

logger = logging.getLogger(__name__)

TOOL_NAME = "hyponormal-check"
TOOL_VERSION = "1.0.0"

WINDOW_KINDS = ("exact", "prefix")
OPTION_KEYS = set(ANALYSIS_CONFIG) | {"window", "exact_prefix"}


# ═══════════════════════════════════════════════════════════════════════════════
# LOADING
# ═══════════════════════════════════════════════════════════════════════════════

def load_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"file not found: {path}", location=str(path))
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", location=f"{path}:{e.lineno}:{e.colno}")


def canonical_json(document):
    return json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def input_digest(document):
    return "sha256:" + hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()


@dataclass
class ParsedInput:
    """A validated input document"""

    kind: str
    document: dict
    system: WeightedCompositionSystem = None
    operator: MatrixOperator = None
    options: dict = field(default_factory=dict)
    evaluation_window: int = None


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _number_list(document, key, length=None):
    values = document.get(key)
    if not isinstance(values, list) or not values:
        raise InputError(f"'{key}' must be a non-empty array", location=key)
    if length is not None and len(values) != length:
        raise InputError(f"'{key}' has length {len(values)}, expected {length}", location=key)
    for k, value in enumerate(values):
        if not _is_number(value) or not math.isfinite(value):
            raise InputError(f"'{key}' entries must be finite numbers, got {value!r}",
                             location=f"{key}[{k + 1}]")
    return values


def _parse_options(document, n_points):
    options = document.get("options", {})
    if not isinstance(options, dict):
        raise InputError("'options' must be an object", location="options")
    unknown = sorted(set(options) - OPTION_KEYS)
    if unknown:
        raise InputError(f"unknown option '{unknown[0]}'", location=f"options.{unknown[0]}")

    window = options.get("window", "exact")
    if window not in WINDOW_KINDS:
        raise InputError(f"window must be one of {', '.join(WINDOW_KINDS)}, got {window!r}",
                         location="options.window")
    evaluation_window = None
    if window == "prefix":
        prefix = options.get("exact_prefix")
        if not isinstance(prefix, int) or isinstance(prefix, bool) or not 1 <= prefix <= n_points:
            raise InputError(f"exact_prefix must be an integer in 1..{n_points}, got {prefix!r}",
                             location="options.exact_prefix")
        evaluation_window = prefix
    elif "exact_prefix" in options:
        raise InputError("exact_prefix requires window 'prefix'", location="options.exact_prefix")

    overrides = {k: v for k, v in options.items() if k in ANALYSIS_CONFIG}
    try:
        build_config(overrides)
    except InputError as e:
        raise InputError(str(e.args[0]), location=f"options.{e.location}")
    return overrides, evaluation_window


def parse_system_document(document):
    masses = _number_list(document, "masses")
    n = len(masses)
    u = _number_list(document, "u", n)
    phi = document.get("phi")
    if not isinstance(phi, list) or len(phi) != n:
        raise InputError(f"'phi' must be an array of length {n}", location="phi")
    for k, value in enumerate(phi):
        if not isinstance(value, int) or isinstance(value, bool):
            raise InputError(f"phi entries must be integer indices, got {value!r}",
                             location=f"phi[{k + 1}]")

    options, evaluation_window = _parse_options(document, n)
    system = WeightedCompositionSystem.from_arrays(masses, np.array(phi, dtype=np.int64) - 1, u)
    return ParsedInput(kind="system", document=document, system=system, options=options,
                       evaluation_window=evaluation_window)


def parse_matrix_document(document):
    dim = document.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise InputError(f"'dim' must be a positive integer, got {dim!r}", location="dim")
    entries = document.get("entries")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise InputError(f"'entries' must hold {dim * dim} [re, im] pairs", location="entries")
    values = np.empty(dim * dim, dtype=complex)
    for k, pair in enumerate(entries):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(_is_number(x) and math.isfinite(x) for x in pair)):
            raise InputError(f"entry must be a [re, im] pair, got {pair!r}",
                             location=f"entries[{k + 1}]")
        values[k] = complex(pair[0], pair[1])
    masses = _number_list(document, "masses", dim) if "masses" in document else None

    options, _ = _parse_options(document, dim)
    return ParsedInput(kind="matrix", document=document,
                       operator=MatrixOperator(values.reshape(dim, dim), masses), options=options)


def parse_document(document):
    """Dispatch on shape: 'entries' means a matrix, 'phi' a system"""
    if not isinstance(document, dict):
        raise InputError("document must be a JSON object", location="$")
    if "entries" in document:
        return parse_matrix_document(document)
    if "phi" in document:
        return parse_system_document(document)
    raise InputError("document is neither a system (phi) nor a matrix (entries)", location="$")


def parse_vector(text, dim, location="--vector"):
    """Comma-separated complex numbers, e.g. '1,1' or '1+2j,0'"""
    try:
        values = [complex(part.strip().replace(" ", "")) for part in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}", location=location)
    if len(values) != dim:
        raise InputError(f"vector has {len(values)} entries, expected {dim}", location=location)
    return np.array(values)


# ═══════════════════════════════════════════════════════════════════════════════
# REPORTS
# ═══════════════════════════════════════════════════════════════════════════════

def encode_array(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return [[float(z.real), float(z.imag)] for z in values]
    return [encode_number(x) for x in values]


def decode_complex_array(pairs):
    return np.array([complex(re, im) for re, im in pairs])


def _encode_cell(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return encode_number(value)


def encode_table(table):
    """DataFrame rows as JSON records; NaN cells become null"""
    return [{key: _encode_cell(value) for key, value in row.items()}
            for row in table.to_dict(orient="records")]


def report_header(kind, parsed=None, config=None):
    header = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "kind": kind,
        "generated_at": datetime.now(UTC).isoformat(timespec="seconds"),
    }
    if parsed is not None:
        header["input_digest"] = input_digest(parsed.document)
        header["input"] = parsed.document
    if config is not None:
        header["config"] = config
    return header


def system_report(parsed, analysis, config, elapsed):
    criterion = analysis.criterion
    closed = analysis.closed_range
    report = report_header("system", parsed, config)
    report["scope"] = analysis.scope
    report["results"] = {
        "n_points": analysis.system.n_points,
        "evaluation_window": analysis.evaluation_window,
        "h": encode_array(analysis.h),
        "J": encode_array(analysis.J),
        "modulus": encode_array(analysis.modulus),
        "Jn_table": [encode_array(row) for row in analysis.Jn_table],
        "Jn_direct_discrepancy": encode_number(analysis.Jn_direct_discrepancy),
        "support_u": analysis.support_u.one_based(),
        "support_J": analysis.support_J.one_based(),
        "criterion": encode_array(criterion.criterion),
        "lambda_min": encode_number(criterion.lambda_min),
        "argmax_index": None if criterion.argmax_index is None else criterion.argmax_index + 1,
        "violating_index": (None if criterion.violating_index is None
                            else criterion.violating_index + 1),
        "degenerate": criterion.degenerate,
        "delta": encode_number(closed.delta),
        "closed_range": closed.closed_range,
        "preimage_invariant": closed.preimage_invariant,
        "growth_table": [] if closed.growth_table is None else encode_table(closed.growth_table),
        "kernel_inclusion": analysis.kernel_inclusion,
        "range_star_support": analysis.range_star_support.one_based(),
    }
    report["certificates"] = [c.to_dict() for c in analysis.certificates]
    report["timings"] = {"analysis_seconds": round(elapsed, 6)}
    return report


def operator_report(parsed, analysis, config, elapsed):
    factorization = analysis.factorization
    report = report_header("matrix", parsed, config)
    report["scope"] = "exact"
    report["results"] = {
        "dim": analysis.operator.dim,
        "weighted": analysis.operator.weighted,
        "lambda_min": encode_number(analysis.lambda_min),
        "kernel_inclusion": analysis.kernel_inclusion,
        "operator_norm": encode_number(analysis.operator_norm),
        "douglas": {
            "feasible": factorization.feasible,
            "factor_norm": encode_number(factorization.norm),
            "implied_lambda": encode_number(factorization.implied_lambda),
            "residual": encode_number(factorization.residual),
            "violating_vector": (None if factorization.violating_vector is None
                                 else encode_array(factorization.violating_vector.astype(complex))),
        },
    }
    report["certificates"] = [c.to_dict() for c in analysis.certificates]
    report["timings"] = {"analysis_seconds": round(elapsed, 6)}
    return report


def orbit_report(parsed, h, steps, lam, norms, bound_check, growth_constant, certificates, config,
                 elapsed):
    report = report_header("orbit", parsed, config)
    report["orbit"] = {
        "h": encode_array(np.asarray(h, dtype=complex)),
        "steps": steps,
        "lambda": encode_number(lam),
        "norms": encode_array(norms),
        "ratio": None if bound_check is None else encode_number(bound_check.ratio),
        "bound_table": [] if bound_check is None else encode_table(bound_check.table),
        "contradiction": False if bound_check is None else bound_check.contradiction,
        "growth_constant": encode_number(growth_constant),
    }
    report["certificates"] = [c.to_dict() for c in certificates]
    report["timings"] = {"analysis_seconds": round(elapsed, 6)}
    return report


def corpus_report(summary, config, elapsed):
    report = report_header("xcheck", config=config)
    report["corpus"] = {
        "seed": summary.seed,
        "count": summary.count,
        "passed": summary.passed,
        "failed": summary.failed,
        "systems": encode_table(summary.table),
        "first_failure": summary.first_failure,
    }
    report["timings"] = {"analysis_seconds": round(elapsed, 6)}
    return report


def continuous_report(result, elapsed):
    grid = result.grid
    report = report_header("continuous")
    report["grid"] = {"interval": [0.0, 0.5], "nodes": grid.nodes, "rule": grid.rule,
                      "tol": grid.tol}
    report["results"] = {
        "h_at_quarter": result.h_at_quarter,
        "preimage_mass": result.preimage_mass,
        "change_of_variables": encode_table(result.change_of_variables),
        "norm_identity_residual": [encode_number(x) for x in result.norm_identity_residual],
        "criterion_max_measured": result.criterion_max_measured,
        "criterion_max_stated": result.criterion_max_stated,
        "criterion_max_derived": result.criterion_max_derived,
        "criterion_le_one": result.criterion_ok,
        "support_gap_nodes": result.support_gap_nodes,
        "support_gap_start": encode_number(result.support_gap_start),
        "J_errors": {k: encode_number(v) for k, v in result.J_errors.items()},
        "J_winner": result.J_winner,
    }
    report["certificates"] = []
    report["timings"] = {"analysis_seconds": round(elapsed, 6)}
    return report


def dumps(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# ═══════════════════════════════════════════════════════════════════════════════
# REPLAY
# ═══════════════════════════════════════════════════════════════════════════════

def verify_report(report):
    """
    Re-verify every certificate of a structured report

    Returns:
        list of (Certificate, ok) pairs

    Raises:
        InputError: not a replayable report, or the embedded input no longer
            matches its digest
    """
    if not isinstance(report, dict) or report.get("tool") != TOOL_NAME:
        raise InputError("not a hyponormal-check report", location="tool")
    if "input" not in report:
        raise InputError(f"{report.get('kind')!r} reports carry no certificates to replay",
                         location="kind")
    if input_digest(report["input"]) != report.get("input_digest"):
        raise InputError("embedded input does not match input_digest", location="input_digest")

    parsed = parse_document(report["input"])
    config = build_config(report.get("config"))
    outcomes = []
    for data in report.get("certificates", []):
        certificate = Certificate.from_dict(data)
        if report["kind"] == "orbit":
            h = decode_complex_array(report["orbit"]["h"])
            operator = parsed.operator if parsed.kind == "matrix" else operator_of_system(parsed.system)
            ok = verify_operator_certificate(certificate, operator, config, h=h)
        elif parsed.kind == "system":
            ok = verify_system_certificate(certificate, parsed.system, config,
                                           parsed.evaluation_window)
        else:
            ok = verify_operator_certificate(certificate, parsed.operator, config)
        logger.info(f"{'✓' if ok else '✗'} {certificate.describe()}")
        outcomes.append((certificate, ok))
    return outcomes

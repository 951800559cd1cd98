"""
Text Rendering
Plain-text views of structured reports. Every number is printed from the
report dict with repr, so text and structured output carry the same values.
"""

from tabulate import tabulate

from certificates.certificate import Certificate, SCOPE_NOTES

WIDTH = 80


def _cell(value):
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    return str(value)


def _table(rows, headers):
    text = tabulate([[_cell(v) for v in row] for row in rows], headers=headers,
                    tablefmt="simple", disable_numparse=True)
    return ["  " + line for line in text.splitlines()]


def _records_table(records):
    if not records:
        return ["  (empty)"]
    headers = list(records[0])
    return _table([[r[h] for h in headers] for r in records], headers)


def _banner(title, report):
    lines = ["═" * WIDTH, f"  {title} - {report['generated_at']}",
             f"  {report['tool']} {report['version']}"]
    if "input_digest" in report:
        lines.append(f"  input {report['input_digest']}")
    lines.append("═" * WIDTH)
    return lines


def _section(title):
    return ["", f"  {title}", "  " + "─" * (WIDTH - 4)]


def _field(label, value):
    return f"  {label}: {_cell(value)}"


def _certificates(report):
    lines = _section("CERTIFICATES")
    certificates = report.get("certificates", [])
    if not certificates:
        lines.append("  none (inconclusive)")
    for data in certificates:
        lines.append("  ✓ " + Certificate.from_dict(data).describe())
    return lines


def _render_system(report):
    results = report["results"]
    document = report["input"]
    lines = _banner("HYPONORMALITY ANALYSIS", report)

    lines += _section("SYSTEM")
    lines.append(_field("Points", results["n_points"]))
    lines.append(_field("Scope", f"{report['scope']} ({SCOPE_NOTES[report['scope']]})"))
    lines.append(_field("Exact prefix", results["evaluation_window"]))

    lines += _section("POINTWISE")
    rows = zip(range(1, results["n_points"] + 1), document["masses"], document["phi"],
               document["u"], results["h"], results["J"], results["modulus"], results["criterion"])
    lines += _table(rows, ["k", "m", "phi", "u", "h", "J", "|W|", "K"])

    lines += _section("λ-HYPONORMALITY")
    lines.append(_field("lambda_min", results["lambda_min"]))
    lines.append(_field("Attained at", results["argmax_index"]))
    lines.append(_field("Violating index", results["violating_index"]))
    lines.append(_field("Degenerate", results["degenerate"]))
    lines.append(_field("S(u)", results["support_u"]))
    lines.append(_field("S(J)", results["support_J"]))
    lines.append(_field("Ker(W) ⊆ Ker(W*)", results["kernel_inclusion"]))
    lines.append(_field("closure R(W*) = l2 on", results["range_star_support"]))

    lines += _section("J_n TABLE")
    columns = results["Jn_table"]
    rows = [[k + 1] + [column[k] for column in columns] for k in range(results["n_points"])]
    lines += _table(rows, ["k"] + [f"J_{n}" for n in range(1, len(columns) + 1)])
    lines.append(_field("Recursive vs direct (relative)", results["Jn_direct_discrepancy"]))

    lines += _section("CLOSED RANGE")
    lines.append(_field("delta", results["delta"]))
    lines.append(_field("Closed range", results["closed_range"]))
    lines.append(_field("phi^-1(S(J)) ⊆ S(J)", results["preimage_invariant"]))
    lines += _records_table(results["growth_table"])
    return lines


def _render_matrix(report):
    results = report["results"]
    douglas = results["douglas"]
    lines = _banner("OPERATOR ANALYSIS", report)
    lines += _section("OPERATOR")
    lines.append(_field("Dimension", results["dim"]))
    lines.append(_field("Weighted", results["weighted"]))
    lines.append(_field("Operator norm", results["operator_norm"]))
    lines += _section("λ-HYPONORMALITY")
    lines.append(_field("lambda_min", results["lambda_min"]))
    lines.append(_field("Ker(T) ⊆ Ker(T†)", results["kernel_inclusion"]))
    lines += _section("DOUGLAS FACTOR")
    lines.append(_field("Feasible", douglas["feasible"]))
    lines.append(_field("‖C‖", douglas["factor_norm"]))
    lines.append(_field("‖C‖²", douglas["implied_lambda"]))
    lines.append(_field("Residual", douglas["residual"]))
    lines.append(_field("Violating range vector", douglas["violating_vector"]))
    return lines


def _render_orbit(report):
    orbit = report["orbit"]
    lines = _banner("ORBIT GROWTH", report)
    lines += _section("ORBIT")
    lines.append(_field("h", orbit["h"]))
    lines.append(_field("Steps", orbit["steps"]))
    lines.append(_field("lambda", orbit["lambda"]))
    lines.append(_field("‖Th‖/‖h‖", orbit["ratio"]))
    lines.append(_field("Auto growth constant", orbit["growth_constant"]))
    lines.append(_field("Contradiction", orbit["contradiction"]))
    if orbit["bound_table"]:
        lines += _records_table(orbit["bound_table"])
    else:
        lines += _table(enumerate(orbit["norms"]), ["n", "norm"])
    return lines


def _render_corpus(report):
    corpus = report["corpus"]
    lines = _banner("CROSS-VALIDATION", report)
    lines += _section("CORPUS")
    lines.append(_field("Seed", corpus["seed"]))
    lines.append(_field("Systems", corpus["count"]))
    lines.append(_field("Passed", corpus["passed"]))
    lines.append(_field("Failed", corpus["failed"]))
    failing = [r for r in corpus["systems"] if not r["passed"]]
    if failing:
        lines += _section("FAILURES")
        lines += _records_table(failing)
        lines.append(_field("First failure", corpus["first_failure"]))
    return lines


def _render_continuous(report):
    results = report["results"]
    grid = report["grid"]
    lines = _banner("CONTINUOUS EXAMPLE", report)
    lines += _section("GRID")
    lines.append(_field("Rule", grid["rule"]))
    lines.append(_field("Nodes", grid["nodes"]))
    lines.append(_field("Tolerance", grid["tol"]))
    lines += _section("CHANGE OF VARIABLES")
    lines += _records_table(results["change_of_variables"])
    lines += _section("PUSHFORWARD")
    lines.append(_field("h(0.25)", results["h_at_quarter"]))
    lines.append(_field("∫ u² over phi^-1(0, 1/4)", results["preimage_mass"]))
    lines.append(_field("∫ J f² = ‖Wf‖² residual (n, 2n)", results["norm_identity_residual"]))
    for name, error in results["J_errors"].items():
        lines.append(_field(f"max |J − {name}|", error))
    lines.append(_field("J closed form matching the pushforward", results["J_winner"]))
    lines += _section("CRITERION")
    lines.append(_field("max over grid, measured J", results["criterion_max_measured"]))
    lines.append(_field("max over grid, J = sqrt(x)/4", results["criterion_max_stated"]))
    lines.append(_field("max over grid, J = x/2", results["criterion_max_derived"]))
    lines.append(_field("criterion ≤ 1", results["criterion_le_one"]))
    lines.append(_field("Nodes with u > 0 and J = 0", results["support_gap_nodes"]))
    lines.append(_field("Support gap starts at", results["support_gap_start"]))
    return lines


def _render_verify(report):
    lines = _banner("CERTIFICATE REPLAY", report)
    lines += _section(f"{report['source_kind'].upper()} REPORT")
    for entry in report["certificates"]:
        mark = "✓" if entry["verified"] else "✗"
        lines.append(f"  {mark} " + Certificate.from_dict(entry["certificate"]).describe())
    lines.append(_field("All verified", report["all_verified"]))
    return lines


RENDERERS = {
    "system": _render_system,
    "matrix": _render_matrix,
    "orbit": _render_orbit,
    "xcheck": _render_corpus,
    "continuous": _render_continuous,
    "verify": _render_verify,
}


def render_text(report):
    lines = RENDERERS[report["kind"]](report)
    if report["kind"] not in ("xcheck", "verify"):
        lines += _certificates(report)
    lines.append("═" * WIDTH)
    return "\n".join(lines) + "\n"

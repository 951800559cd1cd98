"""
Configuration for the hyponormality toolkit
Defaults for tolerances and table sizes; every value can be overridden per
document (SystemDocument options) or per command line flag.
"""

import math

from .errors import InputError


# ═══════════════════════════════════════════════════════════════════════════════
# DEFAULTS
# ═══════════════════════════════════════════════════════════════════════════════

ANALYSIS_CONFIG = {
    # Supports
    "support_tol": 1e-12,          # relative to max|f|

    # PSD / rank decisions
    "psd_tol": 1e-10,              # relative to the spectral scale
    "rank_tol": 1e-10,             # relative singular value threshold
    "lambda_tol": 1e-9,            # slack when comparing λ against 1

    # Minimal λ search
    "bisection_max_iter": 60,
    "bisection_rel_width": 1e-12,

    # J_n tables
    "max_n": 6,
    "growth_max_n": 10,

    # Orbit bounds
    "orbit_slack": 1e-8,

    # Quadrature (continuous example)
    "quad_tol": 1e-6,
    "quad_nodes": 4096,
    "quad_rule": "midpoint",

    # Prefix windows
    "tail_bound_asserted": False,
}

TOLERANCE_KEYS = ("support_tol", "psd_tol", "rank_tol", "lambda_tol",
                  "bisection_rel_width", "orbit_slack", "quad_tol")

QUAD_RULES = ("midpoint", "gauss")


def build_config(overrides=None):
    """
    Merge overrides into a fresh copy of ANALYSIS_CONFIG

    Args:
        overrides: dict of config keys to replace (None values are ignored)

    Returns:
        New config dict

    Raises:
        InputError: unknown key, non-positive tolerance or bad rule name
    """
    config = dict(ANALYSIS_CONFIG)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in ANALYSIS_CONFIG:
            raise InputError(f"Unknown config key '{key}'", location=key)
        config[key] = value

    for key in TOLERANCE_KEYS:
        value = config[key]
        if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
            raise InputError(f"{key} must be a positive number, got {value!r}", location=key)

    for key in ("max_n", "growth_max_n", "bisection_max_iter", "quad_nodes"):
        if not isinstance(config[key], int) or config[key] < 1:
            raise InputError(f"{key} must be a positive integer, got {config[key]!r}", location=key)

    if config["quad_rule"] not in QUAD_RULES:
        raise InputError(f"quad_rule must be one of {QUAD_RULES}", location="quad_rule")

    config["tail_bound_asserted"] = bool(config["tail_bound_asserted"])
    return config

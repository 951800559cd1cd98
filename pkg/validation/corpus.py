"""
Random System Corpus
Seeded random φ-invariant systems and the full oracle battery run on each.

Usage:
    from validation.corpus import validate_corpus

    summary = validate_corpus(seed=42, count=100)
    print(summary.passed, summary.failed)
"""

from dataclasses import dataclass, field
import logging

import numpy as np
import pandas as pd

from dense.matrix_operator import minimal_lambda
from utils.config import build_config
from utils.errors import ConsistencyError, OracleDisagreement
from wco.operator import WeightedCompositionSystem
from .bridge import (CheckResult, matrix_of_system, xcheck_bridge_isometry, xcheck_closed_range,
                     xcheck_coordinates, xcheck_douglas, xcheck_Jn, xcheck_kernels, xcheck_lambda,
                     xcheck_operator_formulas, xcheck_range_support)

logger = logging.getLogger(__name__)

MASS_RANGE = (0.1, 10.0)
WEIGHT_RANGE = (0.5, 2.0)
ZERO_WEIGHT_RATE = 0.2


def random_system(rng, max_points=12):
    """
    Random system on 1..max_points points

    Masses uniform in [0.1, 10], weights uniform in [0.5, 2] with about 20%
    zeros, φ uniform on the window (so φ-invariant by construction).
    """
    n = int(rng.integers(1, max_points + 1))
    masses = rng.uniform(*MASS_RANGE, size=n)
    phi = rng.integers(0, n, size=n)
    u = rng.uniform(*WEIGHT_RANGE, size=n)
    u[rng.random(n) < ZERO_WEIGHT_RATE] = 0.0
    return WeightedCompositionSystem.from_arrays(masses, phi, u)


def generate_corpus(seed, count, max_points=12):
    rng = np.random.default_rng(seed)
    return [random_system(rng, max_points) for _ in range(count)]


def validate_system(sys, config=None, rng=None):
    """
    Run every oracle on one system

    Returns:
        list of CheckResult (never raises on oracle failure)
    """
    config = build_config(config)
    rng = np.random.default_rng(0) if rng is None else rng
    results = []

    try:
        agreement = xcheck_lambda(sys, config)
        results.append(CheckResult("lambda_agreement", True,
                                   f"criterion {agreement.criterion_lambda!r}, "
                                   f"dense {agreement.dense_lambda!r}",
                                   value=agreement.criterion_lambda))
    except (OracleDisagreement, ConsistencyError) as e:
        results.append(CheckResult("lambda_agreement", False, str(e)))

    results.append(xcheck_operator_formulas(sys, rng))
    results.append(xcheck_kernels(sys, config))
    results.append(xcheck_range_support(sys, config))
    results.extend(xcheck_Jn(sys, rng, config))
    results.append(xcheck_bridge_isometry(sys, rng))
    try:
        results.append(xcheck_closed_range(sys, config))
    except ConsistencyError as e:
        results.append(CheckResult("closed_range_growth", False, str(e)))
    results.append(xcheck_douglas(sys, config))
    results.append(xcheck_coordinates(sys, config))

    try:
        lam = minimal_lambda(matrix_of_system(sys), config)
        sane = lam == 0.0 or lam >= 1.0 - 1e-10
        results.append(CheckResult("finite_dimension_sanity", sane, f"minimal λ {lam!r}"))
    except ConsistencyError as e:
        results.append(CheckResult("finite_dimension_sanity", False, str(e)))
    return results


@dataclass
class CorpusSummary:
    """Per-system outcomes of a corpus run"""

    seed: int
    count: int
    table: pd.DataFrame
    first_failure: dict = None
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return int(self.table["passed"].sum()) if len(self.table) else 0

    @property
    def failed(self):
        return self.count - self.passed

    @property
    def ok(self):
        return self.failed == 0


def validate_corpus(seed, count, config=None, max_points=12):
    """
    Validate a seeded corpus

    Returns:
        CorpusSummary; first_failure holds the failing system's arrays for replay
    """
    config = build_config(config)
    rng = np.random.default_rng(seed)
    rows = []
    first_failure = None
    failures = []

    for index in range(count):
        sys = random_system(rng, max_points)
        results = validate_system(sys, config, np.random.default_rng([seed, index]))
        failed = [r for r in results if not r.passed]
        lam = next((r.value for r in results if r.name == "lambda_agreement"), None)
        rows.append({"system": index + 1, "n_points": sys.n_points, "lambda": lam,
                     "checks": len(results), "passed": not failed,
                     "failed_checks": ", ".join(r.name for r in failed)})
        if failed:
            failures.append((index + 1, failed))
            for r in failed:
                logger.error(f"System {index + 1}: {r.name} failed ({r.detail})")
            if first_failure is None:
                first_failure = {"system": index + 1,
                                 "masses": sys.masses.tolist(),
                                 "phi": (sys.phi + 1).tolist(),
                                 "u": sys.u.tolist(),
                                 "failed_checks": [r.name for r in failed]}

    table = pd.DataFrame(rows, columns=["system", "n_points", "lambda", "checks", "passed",
                                        "failed_checks"])
    summary = CorpusSummary(seed=seed, count=count, table=table, first_failure=first_failure,
                            failures=failures)
    if summary.ok:
        logger.info(f"✓ Corpus seed={seed}: {count} systems passed")
    else:
        logger.error(f"Corpus seed={seed}: {summary.failed} of {count} systems failed")
    return summary


"""
Weighted Composition Operator Analysis
Pointwise decision procedures for W = M_u C_φ with certificate output:

- λ-hyponormality: W is λ-hyponormal iff S(u) ⊆ S(J) and
  K = (h∘φ) E(u²/J) ≤ λ on S(u); λ_min = max of K over S(u)
- closed range: J ≥ δ on S(J), and J_n ≥ δⁿ when φ⁻¹(S(J)) ⊆ S(J)
- kernels: Ker(W) ⊆ Ker(W*) iff S(u) ⊆ S(J); closure of R(W*) is ℓ²(S(J))
- weak hypercyclicity is excluded when λ_min ≤ 1

Usage:
    from wco.analysis import analyze_system

    report = analyze_system(system)
    print(report.lambda_min, [c.kind for c in report.certificates])
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np
import pandas as pd

from certificates.certificate import (Certificate, CertificateKind, SCOPE_EXACT, SCOPE_PREFIX,
                                      SCOPE_TAIL_ASSERTED, WCO_LAMBDA_CRITERION, WCO_SUPPORT_GATE,
                                      WCO_CLOSED_RANGE, WCO_NOT_HYPERCYCLIC)
from measure.discrete_space import (Support, radon_nikodym_h, conditional_expectation,
                                    relative_support)
from utils.config import build_config
from utils.errors import ConsistencyError, InputError
from .operator import compute_J, compute_modulus, compute_Jn_table, compute_Jn_direct

logger = logging.getLogger(__name__)

# Finite nonzero systems satisfy λ_min ≥ 1 (trace equality)
FINITE_LAMBDA_FLOOR = 1.0 - 1e-10

# Relative slack for J_n ≥ δⁿ
GROWTH_SLACK = 1e-12


@dataclass
class CriterionResult:
    """Outcome of the pointwise λ-hyponormality criterion"""

    criterion: np.ndarray
    lambda_min: float
    argmax_index: int = None
    violating_index: int = None
    support_u: Support = None
    support_J: Support = None
    degenerate: bool = False
    certificates: list = field(default_factory=list)

    @property
    def finite(self):
        return math.isfinite(self.lambda_min)


@dataclass
class ClosedRangeResult:
    """δ, the preimage hypothesis and the J_n growth table"""

    degenerate: bool
    closed_range: bool
    delta: float = None
    preimage_invariant: bool = False
    growth_table: pd.DataFrame = None
    growth_holds: bool = False
    certificate: Certificate = None


@dataclass
class AnalysisReport:
    """Everything analyze_system computes for one system"""

    system: object
    scope: str
    evaluation_window: int
    h: np.ndarray
    J: np.ndarray
    modulus: np.ndarray
    Jn_table: list
    Jn_direct_discrepancy: float
    criterion: CriterionResult
    closed_range: ClosedRangeResult
    kernel_inclusion: bool
    range_star_support: Support
    certificates: list

    @property
    def lambda_min(self):
        return self.criterion.lambda_min

    @property
    def support_u(self):
        return self.criterion.support_u

    @property
    def support_J(self):
        return self.criterion.support_J

    def certificate_of(self, kind):
        for certificate in self.certificates:
            if certificate.kind == kind:
                return certificate
        return None


def resolve_scope(evaluation_window, config):
    if evaluation_window is None:
        return SCOPE_EXACT
    return SCOPE_TAIL_ASSERTED if config["tail_bound_asserted"] else SCOPE_PREFIX


def _check_window(sys, evaluation_window):
    if evaluation_window is None:
        return
    if not isinstance(evaluation_window, (int, np.integer)) or not 1 <= evaluation_window <= sys.n_points:
        raise InputError(f"exact prefix must lie in 1..{sys.n_points}, got {evaluation_window!r}",
                         location="options.exact_prefix")


def _restrict(support, evaluation_window):
    if evaluation_window is None:
        return support
    return Support(indices=tuple(k for k in support.indices if k < evaluation_window),
                   tolerance=support.tolerance)


def hyponormality_criterion(sys, config=None, evaluation_window=None):
    """
    Pointwise λ-hyponormality criterion

    K(k) = h(φ(k)) E(q)(k) with q = u²/J on S(J) and 0 elsewhere. When
    S(u) ⊄ S(J) no λ exists and lambda_min is +∞.

    Args:
        sys: WeightedCompositionSystem
        config: config overrides (see utils.config)
        evaluation_window: restrict the gate and the maximum to the first
            points of a prefix window

    Returns:
        CriterionResult
    """
    config = build_config(config)
    _check_window(sys, evaluation_window)
    scope = resolve_scope(evaluation_window, config)

    J = compute_J(sys)
    h = radon_nikodym_h(sys.space, sys.map)
    support_u = relative_support(sys.u, config["support_tol"])
    support_J = relative_support(J, config["support_tol"])
    gated_u = _restrict(support_u, evaluation_window)

    in_J = support_J.mask(sys.n_points)
    q = np.zeros(sys.n_points)
    q[in_J] = sys.u[in_J] ** 2 / J[in_J]
    criterion = h[sys.phi] * conditional_expectation(sys.space, sys.map, q)

    missing = gated_u.missing_from(support_J)
    if missing:
        violating = missing[0]
        logger.info(f"S(u) ⊄ S(J): point {violating + 1} has u={sys.u[violating]:.6g}, "
                    f"J={J[violating]:.3g}; no λ exists")
        certificate = Certificate(
            kind=CertificateKind.NO_LAMBDA_EXISTS,
            theorem=WCO_SUPPORT_GATE,
            witnesses={"violating_index": violating + 1,
                       "u": float(sys.u[violating]),
                       "J": float(J[violating])},
            scope=scope)
        return CriterionResult(criterion=criterion, lambda_min=math.inf, violating_index=violating,
                               support_u=support_u, support_J=support_J,
                               certificates=[certificate])

    if not gated_u.indices:
        # W = 0 on the evaluated points: λ-hyponormal for every λ > 0
        logger.info("S(u) is empty on the evaluated points; W is λ-hyponormal for every λ")
        return CriterionResult(criterion=criterion, lambda_min=0.0, support_u=support_u,
                               support_J=support_J, degenerate=True)

    indices = np.array(gated_u.indices)
    position = int(np.argmax(criterion[indices]))
    argmax_index = int(indices[position])
    lambda_min = float(criterion[argmax_index])
    logger.info(f"✓ λ_min = {lambda_min:.12g} attained at point {argmax_index + 1}")

    certificate = Certificate(
        kind=CertificateKind.LAMBDA_HYPONORMAL,
        theorem=WCO_LAMBDA_CRITERION,
        witnesses={"lambda": lambda_min, "argmax_index": argmax_index + 1},
        scope=scope)
    return CriterionResult(criterion=criterion, lambda_min=lambda_min, argmax_index=argmax_index,
                           support_u=support_u, support_J=support_J, certificates=[certificate])


def closed_range_check(sys, config=None, Jn_table=None):
    """
    Closed range data: δ = min J on S(J) and the J_n ≥ δⁿ growth table

    On a finite system δ > 0 whenever S(J) is nonempty, so the flag is about
    the truncation. The growth table is always reported; growth is only
    guaranteed when φ⁻¹(S(J)) ⊆ S(J).

    Args:
        sys: WeightedCompositionSystem
        config: config overrides
        Jn_table: precomputed [J_1, J_2, ...] (optional)

    Returns:
        ClosedRangeResult
    """
    config = build_config(config)
    max_n = config["growth_max_n"]
    if Jn_table is None or len(Jn_table) < max_n:
        Jn_table = compute_Jn_table(sys, max_n)

    J = Jn_table[0]
    support_J = relative_support(J, config["support_tol"])
    if not support_J.indices:
        logger.info("S(J) is empty (W = 0); closed range holds vacuously")
        return ClosedRangeResult(degenerate=True, closed_range=True)

    in_J = support_J.mask(sys.n_points)
    delta = float(J[in_J].min())
    preimage_invariant = bool(np.all(in_J[sys.map.preimage_mask(in_J)]))

    rows = []
    for n in range(1, max_n + 1):
        minimum = float(Jn_table[n - 1][in_J].min())
        floor = delta ** n
        rows.append({"n": n, "min_Jn_on_SJ": minimum, "delta_pow_n": floor,
                     "holds": bool(minimum >= floor * (1.0 - GROWTH_SLACK))})
    growth_table = pd.DataFrame(rows, columns=["n", "min_Jn_on_SJ", "delta_pow_n", "holds"])
    growth_holds = bool(growth_table["holds"].all())

    if preimage_invariant and not growth_holds:
        failing = int(growth_table.loc[~growth_table["holds"], "n"].iloc[0])
        raise ConsistencyError(f"J_n ≥ δⁿ fails at n={failing} although φ⁻¹(S(J)) ⊆ S(J)")

    logger.info(f"✓ δ = {delta:.6g} on S(J); φ⁻¹(S(J)) ⊆ S(J): {preimage_invariant}")
    certificate = Certificate(
        kind=CertificateKind.CLOSED_RANGE,
        theorem=WCO_CLOSED_RANGE,
        witnesses={"delta": delta,
                   "preimage_invariant": preimage_invariant,
                   "growth_checked_to": max_n if preimage_invariant else 0},
        scope=SCOPE_EXACT)
    return ClosedRangeResult(degenerate=False, closed_range=True, delta=delta,
                             preimage_invariant=preimage_invariant, growth_table=growth_table,
                             growth_holds=growth_holds, certificate=certificate)


def kernel_inclusion_check(sys, config=None):
    """Ker(W) ⊆ Ker(W*) iff S(u) ⊆ S(J)"""
    config = build_config(config)
    support_u = relative_support(sys.u, config["support_tol"])
    support_J = relative_support(compute_J(sys), config["support_tol"])
    return support_u.issubset(support_J)


def range_star_support(sys, config=None):
    """The closure of R(W*) is ℓ²(S(J)); returns S(J)"""
    config = build_config(config)
    return relative_support(compute_J(sys), config["support_tol"])


def hypercyclicity_certificate(sys, config=None, evaluation_window=None, criterion=None):
    """
    NotWeaklyHypercyclic certificate when λ_min ≤ 1

    Absence of a certificate means inconclusive, never hypercyclic.

    Returns:
        Certificate or None
    """
    config = build_config(config)
    if criterion is None:
        criterion = hyponormality_criterion(sys, config, evaluation_window)
    if not criterion.finite or criterion.lambda_min > 1.0 + config["lambda_tol"]:
        return None

    scope = resolve_scope(evaluation_window, config)
    witnesses = {"lambda": criterion.lambda_min}
    if criterion.argmax_index is not None:
        witnesses["argmax_index"] = criterion.argmax_index + 1
    if criterion.degenerate:
        witnesses["degenerate"] = True
    if scope != SCOPE_EXACT:
        witnesses["exact_prefix"] = int(evaluation_window)
    if scope == SCOPE_TAIL_ASSERTED:
        witnesses["tail_bound"] = 1.0

    certificate = Certificate(kind=CertificateKind.NOT_WEAKLY_HYPERCYCLIC,
                              theorem=WCO_NOT_HYPERCYCLIC, witnesses=witnesses, scope=scope)
    if scope == SCOPE_PREFIX:
        logger.warning(f"Criterion ≤ 1 on the first {evaluation_window} points only; "
                       f"certificate is prefix evidence")
    else:
        logger.info(f"✓ Not weakly hypercyclic (λ_min = {criterion.lambda_min:.12g})")
    return certificate


def analyze_system(sys, config=None, evaluation_window=None):
    """
    Full analysis of one weighted composition system

    Args:
        sys: WeightedCompositionSystem
        config: config overrides
        evaluation_window: exact prefix length for prefix windows, None for
            exact finite systems

    Returns:
        AnalysisReport

    Raises:
        ConsistencyError: recursive and direct J_n disagree, or a nonzero
            exact system reports λ_min < 1
    """
    config = build_config(config)
    scope = resolve_scope(evaluation_window, config)
    logger.info(f"Analyzing {sys.n_points}-point system (scope: {scope})")

    table_size = max(config["max_n"], config["growth_max_n"])
    Jn_table = compute_Jn_table(sys, table_size)
    J = Jn_table[0]

    discrepancy = 0.0
    for n in range(1, config["max_n"] + 1):
        direct = compute_Jn_direct(sys, n)
        scale = max(float(np.abs(direct).max()), np.finfo(float).tiny)
        discrepancy = max(discrepancy, float(np.abs(direct - Jn_table[n - 1]).max()) / scale)
    if discrepancy > 1e-8:
        raise ConsistencyError(f"recursive and direct J_n disagree (relative {discrepancy:.3g})")

    criterion = hyponormality_criterion(sys, config, evaluation_window)
    if (scope == SCOPE_EXACT and criterion.finite and not criterion.degenerate
            and criterion.lambda_min < FINITE_LAMBDA_FLOOR):
        raise ConsistencyError(f"finite nonzero system reports λ_min = {criterion.lambda_min!r} < 1")

    closed_range = closed_range_check(sys, config, Jn_table)
    kernel_inclusion = kernel_inclusion_check(sys, config)
    star_support = range_star_support(sys, config)

    certificates = list(criterion.certificates)
    if closed_range.certificate is not None:
        certificates.append(closed_range.certificate)
    not_hypercyclic = hypercyclicity_certificate(sys, config, evaluation_window, criterion)
    if not_hypercyclic is not None:
        certificates.append(not_hypercyclic)

    return AnalysisReport(system=sys, scope=scope, evaluation_window=evaluation_window,
                          h=radon_nikodym_h(sys.space, sys.map), J=J,
                          modulus=compute_modulus(sys), Jn_table=Jn_table[:config["max_n"]],
                          Jn_direct_discrepancy=discrepancy, criterion=criterion,
                          closed_range=closed_range, kernel_inclusion=kernel_inclusion,
                          range_star_support=star_support, certificates=certificates)


def _close(a, b, rel=1e-9):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def verify_system_certificate(certificate, sys, config=None, evaluation_window=None):
    """
    Replay a certificate's witnesses through the checkers

    Returns:
        True when the certificate re-verifies
    """
    config = build_config(config)
    witnesses = certificate.witnesses
    if certificate.scope != resolve_scope(evaluation_window, config) and \
            certificate.kind != CertificateKind.CLOSED_RANGE:
        return False

    if certificate.kind == CertificateKind.CLOSED_RANGE:
        result = closed_range_check(sys, config)
        return (not result.degenerate and _close(result.delta, witnesses["delta"])
                and result.preimage_invariant == witnesses["preimage_invariant"])

    criterion = hyponormality_criterion(sys, config, evaluation_window)
    if certificate.kind == CertificateKind.NO_LAMBDA_EXISTS:
        index = witnesses["violating_index"] - 1
        return (not criterion.finite and index in criterion.support_u
                and index not in criterion.support_J)

    if not criterion.finite:
        return False
    lam = witnesses["lambda"]
    if certificate.kind == CertificateKind.LAMBDA_HYPONORMAL:
        index = witnesses["argmax_index"] - 1
        return _close(criterion.lambda_min, lam) and _close(float(criterion.criterion[index]), lam)
    if certificate.kind == CertificateKind.NOT_WEAKLY_HYPERCYCLIC:
        return _close(criterion.lambda_min, lam) and lam <= 1.0 + config["lambda_tol"]
    return False

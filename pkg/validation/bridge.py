"""
Bridge Oracles
Independent computations binding the pointwise weighted-composition formulas
to dense linear algebra on the same operator.

The bridge is W in standard coordinates through the isometry f ↦ (f_k√m_k):
entry (k, φ(k)) = u_k √(m_k/m_{φ(k)}), zeros elsewhere.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from dense.matrix_operator import MatrixOperator, douglas_factor, minimal_lambda
from utils.config import build_config
from utils.errors import OracleDisagreement
from wco.analysis import (closed_range_check, hyponormality_criterion, kernel_inclusion_check,
                          range_star_support)
from wco.operator import (apply_W, apply_W_star, apply_WW_star, apply_W_power, compute_J,
                          compute_Jn_direct, compute_Jn_table)

logger = logging.getLogger(__name__)

# Relative agreement between the criterion λ and the dense minimal λ
LAMBDA_AGREEMENT_TOL = 1e-6

FORMULA_TOL = 1e-11
ISOMETRY_TOL = 1e-12
JN_EQUIVALENCE_TOL = 1e-10
JN_NORM_TOL = 1e-9

# Diagonal of the R(T†) projector above which a point counts as covered
PROJECTOR_SUPPORT_TOL = 1e-8


@dataclass
class CheckResult:
    """Outcome of one named oracle check"""

    name: str
    passed: bool
    detail: str = ""
    value: object = None


@dataclass
class LambdaAgreement:
    criterion_lambda: float
    dense_lambda: float
    agree: bool


def matrix_of_system(sys):
    """Bridge matrix of W in standard coordinates"""
    n = sys.n_points
    entries = np.zeros((n, n))
    rows = np.arange(n)
    entries[rows, sys.phi] = sys.u * np.sqrt(sys.masses / sys.masses[sys.phi])
    return MatrixOperator(entries)


def operator_of_system(sys):
    """W as a MatrixOperator on ℓ²(μ): entries u_k at (k, φ(k)), masses m"""
    n = sys.n_points
    entries = np.zeros((n, n))
    entries[np.arange(n), sys.phi] = sys.u
    return MatrixOperator(entries, sys.masses)


def _relative_error(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)),
                np.finfo(float).tiny)
    return float(np.abs(a - b).max(initial=0.0)) / scale


def lambdas_agree(a, b, tol=LAMBDA_AGREEMENT_TOL):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def xcheck_lambda(sys, config=None):
    """
    Criterion λ_min against minimal_lambda of the bridge matrix

    Raises:
        OracleDisagreement: the two values differ beyond tolerance
    """
    config = build_config(config)
    criterion_lambda = hyponormality_criterion(sys, config).lambda_min
    dense_lambda = minimal_lambda(matrix_of_system(sys), config)
    if not lambdas_agree(criterion_lambda, dense_lambda):
        logger.error(f"λ disagreement: criterion {criterion_lambda!r}, dense {dense_lambda!r}")
        raise OracleDisagreement(
            f"criterion λ_min = {criterion_lambda!r} but dense minimal λ = {dense_lambda!r}",
            values={"criterion": criterion_lambda, "dense": dense_lambda})
    return LambdaAgreement(criterion_lambda=criterion_lambda, dense_lambda=dense_lambda, agree=True)


def xcheck_operator_formulas(sys, rng, trials=5):
    """
    Matrix products against the pointwise formulas for random f

    T f = W f, T†f = W*f, T†T f = J f and TT†f = u (h∘φ) E(u f).
    """
    T = operator_of_system(sys)
    T_star = T.adjoint()
    J = compute_J(sys)
    worst = 0.0
    for _ in range(trials):
        f = rng.standard_normal(sys.n_points)
        worst = max(worst,
                    _relative_error(np.real(T.apply(f)), apply_W(sys, f)),
                    _relative_error(np.real(T_star.apply(f)), apply_W_star(sys, f)),
                    _relative_error(np.real(T_star.apply(T.apply(f))), J * f),
                    _relative_error(np.real(T.apply(T_star.apply(f))), apply_WW_star(sys, f)))
    return CheckResult("operator_formulas", worst <= FORMULA_TOL, f"max relative error {worst:.3g}")


def _null_space(S, rank_tol):
    U, s, Vh = np.linalg.svd(S)
    s_max = float(s[0])
    rank = int(np.sum(s > rank_tol * s_max)) if s_max > 0 else 0
    return Vh[rank:].conj().T, U[:, rank:], Vh[:rank].conj().T, s_max


def xcheck_kernels(sys, config=None):
    """SVD null spaces: Ker(T) ⊆ Ker(T†) must match S(u) ⊆ S(J)"""
    config = build_config(config)
    S = matrix_of_system(sys).entries
    kernel, kernel_star, _, _ = _null_space(S, config["rank_tol"])
    if kernel.shape[1] == 0:
        included = True
    else:
        leak = kernel - kernel_star @ (kernel_star.conj().T @ kernel)
        included = float(np.linalg.norm(leak, 2)) <= 1e-6
    expected = kernel_inclusion_check(sys, config)
    return CheckResult("kernels", included == expected,
                       f"SVD inclusion {included}, support inclusion {expected}")


def xcheck_range_support(sys, config=None):
    """Column support of R(T†) from the SVD projector against S(J)"""
    config = build_config(config)
    S = matrix_of_system(sys).entries
    _, _, range_star, _ = _null_space(S, config["rank_tol"])
    coverage = np.sum(np.abs(range_star) ** 2, axis=1)
    measured = tuple(int(k) for k in np.flatnonzero(coverage > PROJECTOR_SUPPORT_TOL))
    expected = range_star_support(sys, config).indices
    return CheckResult("range_support", measured == expected,
                       f"projector support {list(measured)}, S(J) {list(expected)}")


def xcheck_bridge_isometry(sys, rng, trials=100):
    """‖Wf‖_μ = ‖A f̃‖ with f̃ = f√m"""
    A = matrix_of_system(sys)
    root_m = np.sqrt(sys.masses)
    worst = 0.0
    for _ in range(trials):
        f = rng.standard_normal(sys.n_points)
        weighted = sys.space.norm(apply_W(sys, f))
        standard = float(np.linalg.norm(A.apply(f * root_m)))
        worst = max(worst, abs(weighted - standard) / max(weighted, standard, np.finfo(float).tiny))
    return CheckResult("bridge_isometry", worst <= ISOMETRY_TOL, f"max relative error {worst:.3g}")


def xcheck_Jn(sys, rng, config=None, trials=20):
    """Recursive against direct J_n, and ‖Wⁿf‖² = Σ J_n f² m"""
    config = build_config(config)
    table = compute_Jn_table(sys, config["max_n"])
    equivalence = max(_relative_error(table[n - 1], compute_Jn_direct(sys, n))
                      for n in range(1, config["max_n"] + 1))

    norm_error = 0.0
    for _ in range(trials):
        f = rng.standard_normal(sys.n_points)
        for n in range(1, config["max_n"] + 1):
            lhs = sys.space.norm(apply_W_power(sys, f, n)) ** 2
            rhs = float(np.sum(table[n - 1] * f ** 2 * sys.masses))
            norm_error = max(norm_error, abs(lhs - rhs) / max(lhs, rhs, np.finfo(float).tiny))
    return [
        CheckResult("Jn_equivalence", equivalence <= JN_EQUIVALENCE_TOL,
                    f"max relative error {equivalence:.3g}"),
        CheckResult("Jn_norm_identity", norm_error <= JN_NORM_TOL,
                    f"max relative error {norm_error:.3g}"),
    ]


def xcheck_closed_range(sys, config=None):
    """J_n ≥ δⁿ on S(J) whenever φ⁻¹(S(J)) ⊆ S(J)"""
    result = closed_range_check(sys, config)
    passed = result.degenerate or not result.preimage_invariant or result.growth_holds
    return CheckResult("closed_range_growth", passed,
                       f"preimage invariant {result.preimage_invariant}, growth {result.growth_holds}")


def xcheck_douglas(sys, config=None):
    """Douglas feasibility ⇔ finite minimal λ, and ‖C‖² = minimal λ"""
    config = build_config(config)
    A = matrix_of_system(sys)
    lam = minimal_lambda(A, config)
    factorization = douglas_factor(A, config)
    passed = factorization.feasible == math.isfinite(lam)
    if passed and factorization.feasible:
        passed = lambdas_agree(factorization.implied_lambda, lam)
    return CheckResult("douglas_lambda", passed,
                       f"feasible {factorization.feasible}, ‖C‖² {factorization.implied_lambda!r}, "
                       f"λ {lam!r}")


def xcheck_coordinates(sys, config=None):
    """minimal λ is the same in weighted and standard coordinates"""
    config = build_config(config)
    weighted = minimal_lambda(operator_of_system(sys), config)
    standard = minimal_lambda(matrix_of_system(sys), config)
    return CheckResult("coordinate_invariance", lambdas_agree(weighted, standard, 1e-8),
                       f"weighted {weighted!r}, standard {standard!r}")

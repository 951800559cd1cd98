"""
Orbit Growth
The λ_n sequence, orbit norms ‖Tⁿh‖ and the growth lower bound for
λ-hyponormal operators:

    ‖Tⁿh‖ ≥ ‖h‖ λ_n (‖Th‖/‖h‖)ⁿ,  λ_n = (1/√λ)^{n(n−1)/2}

plus the weakly-closed-orbit certificates built on geometric growth.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np
import pandas as pd

from certificates.certificate import (Certificate, CertificateKind, GEOMETRIC_GROWTH,
                                      WEAKLY_CLOSED_ORBIT)
from utils.config import build_config
from utils.errors import InputError, PreconditionError
from .matrix_operator import is_lambda_hyponormal, minimal_lambda

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LambdaSequence:
    """
    λ_0..λ_N from the recursion λ_{n+1} = λ_n (1/√λ)ⁿ

    Attributes:
        lam: λ > 0
        exponents: integer t_n with λ_n = (1/√λ)^{t_n}
        values: λ_n by multiplicative recursion (may overflow to inf)
        log_values: log λ_n by additive recursion
    """

    lam: float
    exponents: np.ndarray
    values: np.ndarray
    log_values: np.ndarray

    @property
    def base(self):
        return 1.0 / math.sqrt(self.lam)

    @property
    def N(self):
        return len(self.values) - 1

    def closed_form_exponents(self):
        n = np.arange(self.N + 1)
        return n * (n - 1) // 2


def lambda_sequence(lam, N):
    """
    Args:
        lam: λ > 0
        N: last index (N ≥ 0)

    Returns:
        LambdaSequence
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise InputError(f"λ must be positive and finite, got {lam!r}", location="lambda")
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 0:
        raise InputError(f"N must be a non-negative integer, got {N!r}", location="N")

    base = 1.0 / math.sqrt(lam)
    log_base = math.log(base)
    exponents = np.zeros(N + 1, dtype=np.int64)
    values = np.ones(N + 1)
    log_values = np.zeros(N + 1)
    with np.errstate(over="ignore"):
        for n in range(1, N):
            exponents[n + 1] = exponents[n] + n
            values[n + 1] = values[n] * np.float64(base) ** n
            log_values[n + 1] = log_values[n] + n * log_base
    return LambdaSequence(lam=float(lam), exponents=exponents, values=values,
                          log_values=log_values)


def _nonzero_vector(T, h):
    h = T.vector(h, role="h")
    if T.vector_norm(h) == 0.0:
        raise InputError("orbit vector must be nonzero", location="h")
    return h


def orbit_norms(T, h, N):
    """‖Tⁿh‖ for n = 0..N in the operator's inner product"""
    h = _nonzero_vector(T, h)
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool) or N < 0:
        raise InputError(f"N must be a non-negative integer, got {N!r}", location="N")
    norms = np.empty(N + 1)
    x = h
    norms[0] = T.vector_norm(x)
    for n in range(1, N + 1):
        x = T.apply(x)
        norms[n] = T.vector_norm(x)
    return norms


@dataclass
class OrbitBoundCheck:
    """Per-n comparison of ‖Tⁿh‖ against ‖h‖ λ_n rⁿ"""

    lam: float
    ratio: float
    table: pd.DataFrame
    contradiction: bool

    @property
    def passed(self):
        return not self.contradiction


def orbit_bound_check(T, h, lam, N, config=None):
    """
    Check the λ-hyponormal orbit growth bound for n = 0..N

    Raises:
        PreconditionError: T is not λ-hyponormal at lam

    Returns:
        OrbitBoundCheck; a failing row at a certified λ sets contradiction
    """
    config = build_config(config)
    norms = orbit_norms(T, h, N)
    if not is_lambda_hyponormal(T, lam, config):
        raise PreconditionError(f"T is not {lam!r}-hyponormal; minimal_lambda(T) = "
                                f"{minimal_lambda(T, config)!r}")

    sequence = lambda_sequence(lam, N)
    ratio = float(norms[1] / norms[0]) if N >= 1 else 0.0
    n = np.arange(N + 1)
    with np.errstate(over="ignore", divide="ignore"):
        if ratio > 0.0:
            bounds = np.exp(math.log(norms[0]) + sequence.log_values + n * math.log(ratio))
        else:
            bounds = np.where(n == 0, norms[0], 0.0)
    passes = norms >= bounds * (1.0 - config["orbit_slack"])

    table = pd.DataFrame({"n": n, "norm": norms, "lambda_n": sequence.values,
                          "bound": bounds, "passes": passes})
    contradiction = not bool(passes.all())
    if contradiction:
        failing = int(n[~passes][0])
        logger.error(f"Orbit bound fails at n={failing} for certified λ={lam!r}: "
                     f"{norms[failing]!r} < {bounds[failing]!r}")
    else:
        logger.info(f"✓ Orbit bound holds for n ≤ {N} (λ={lam:.6g}, r={ratio:.6g})")
    return OrbitBoundCheck(lam=float(lam), ratio=ratio, table=table, contradiction=contradiction)


def auto_growth_constant(norms):
    """c = min_n x_n^{1/n} over x_1..x_N"""
    norms = np.asarray(norms, dtype=float)
    if norms.size == 0 or np.any(norms <= 0):
        return 0.0
    n = np.arange(1, norms.size + 1)
    return float(np.min(norms ** (1.0 / n)))


def growth_certificate(norms, c=None, tol=None):
    """
    WeaklyClosedOrbit certificate from geometric growth x_n ≥ cⁿ

    Args:
        norms: x_1..x_N
        c: growth constant, auto-selected when None
        tol: multiplicative slack (default orbit_slack)

    Returns:
        Certificate or None (c ≤ 1 or some x_n < cⁿ)
    """
    tol = build_config()["orbit_slack"] if tol is None else tol
    norms = np.asarray(norms, dtype=float)
    if norms.size == 0:
        return None
    if c is None:
        c = auto_growth_constant(norms)
    if not c > 1.0:
        return None

    n = np.arange(1, norms.size + 1)
    with np.errstate(over="ignore"):
        floors = float(c) ** n
    failing = np.flatnonzero(norms < floors * (1.0 - tol))
    if failing.size:
        logger.debug(f"Geometric growth fails at n={int(failing[0]) + 1} for c={c!r}")
        return None
    return Certificate(kind=CertificateKind.WEAKLY_CLOSED_ORBIT, theorem=GEOMETRIC_GROWTH,
                       witnesses={"c": float(c), "n_checked": int(norms.size)})


def weakly_closed_orbit_certificate(T, h, config=None):
    """
    Orbit of h is weakly closed when minimal λ ≤ 1 and ‖Th‖ > ‖h‖

    The certificate records the floor ‖h‖ λ_N cᴺ on ‖Tᴺh‖ at N = growth_max_n,
    kept in log space as log_growth_floor.

    Returns:
        Certificate or None
    """
    config = build_config(config)
    h = _nonzero_vector(T, h)
    lam = minimal_lambda(T, config)
    if lam > 1.0 + config["lambda_tol"]:
        return None
    h_norm = T.vector_norm(h)
    Th_norm = T.vector_norm(T.apply(h))
    if not Th_norm > h_norm * (1.0 + config["orbit_slack"]):
        return None
    c = Th_norm / h_norm
    N = config["growth_max_n"]
    log_floor = math.log(h_norm) + float(lambda_sequence(lam, N).log_values[N]) + N * math.log(c)
    logger.info(f"✓ Weakly closed orbit: λ={lam:.12g}, ‖Th‖/‖h‖={c:.12g}, "
                f"log floor at n={N}: {log_floor:.6g}")
    return Certificate(kind=CertificateKind.WEAKLY_CLOSED_ORBIT, theorem=WEAKLY_CLOSED_ORBIT,
                       witnesses={"lambda": lam, "c": c, "h_norm": h_norm,
                                  "floor_n": N, "log_growth_floor": log_floor})

"""
Dense Operator Analysis
Minimal λ, Douglas factorization and the certificates they imply, plus
certificate replay for reports.
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np

from certificates.certificate import (Certificate, CertificateKind, CONTRACTIVE_FACTOR,
                                      DENSE_PSD, GEOMETRIC_GROWTH, LAMBDA_NOT_HYPERCYCLIC,
                                      WEAKLY_CLOSED_ORBIT)
from utils.config import build_config
from utils.errors import ConsistencyError
from .matrix_operator import douglas_factor, is_lambda_hyponormal, minimal_lambda, kernel_inclusion
from .orbit import orbit_norms, weakly_closed_orbit_certificate

logger = logging.getLogger(__name__)


def not_weakly_hypercyclic_certificate(T, config=None, lam=None):
    """
    NotWeaklyHypercyclic certificate when minimal λ ≤ 1 + lambda_tol

    Args:
        lam: precomputed minimal_lambda(T) (optional)
    """
    config = build_config(config)
    if lam is None:
        lam = minimal_lambda(T, config)
    if lam > 1.0 + config["lambda_tol"]:
        return None
    witnesses = {"lambda": lam}
    if lam == 0.0:
        witnesses["degenerate"] = True
    logger.info(f"✓ Not weakly hypercyclic (λ = {lam:.12g})")
    return Certificate(kind=CertificateKind.NOT_WEAKLY_HYPERCYCLIC,
                       theorem=LAMBDA_NOT_HYPERCYCLIC, witnesses=witnesses)


@dataclass
class OperatorReport:
    """Everything analyze_operator computes for one matrix"""

    operator: object
    lambda_min: float
    kernel_inclusion: bool
    operator_norm: float
    factorization: object
    certificates: list = field(default_factory=list)

    def certificate_of(self, kind):
        for certificate in self.certificates:
            if certificate.kind == kind:
                return certificate
        return None


def analyze_operator(T, config=None):
    """
    Minimal λ, Douglas factor and certificates for a MatrixOperator

    Returns:
        OperatorReport

    Raises:
        ConsistencyError: Douglas feasibility disagrees with finiteness of the minimal λ
    """
    config = build_config(config)
    logger.info(f"Analyzing {T.dim}×{T.dim} operator (weighted: {T.weighted})")
    lam = minimal_lambda(T, config)
    factorization = douglas_factor(T, config)
    if factorization.feasible != math.isfinite(lam):
        raise ConsistencyError(f"Douglas factorization feasible={factorization.feasible} but "
                               f"minimal λ = {lam!r}")

    certificates = []
    if math.isinf(lam):
        certificates.append(Certificate(kind=CertificateKind.NO_LAMBDA_EXISTS, theorem=DENSE_PSD,
                                        witnesses={"lambda": lam}))
    else:
        certificates.append(Certificate(kind=CertificateKind.LAMBDA_HYPONORMAL, theorem=DENSE_PSD,
                                        witnesses={"lambda": lam}))
        not_hypercyclic = not_weakly_hypercyclic_certificate(T, config, lam)
        if not_hypercyclic is not None:
            certificates.append(not_hypercyclic)
    if factorization.certificate is not None:
        certificates.append(factorization.certificate)

    return OperatorReport(operator=T, lambda_min=lam, kernel_inclusion=kernel_inclusion(T, config),
                          operator_norm=T.operator_norm(), factorization=factorization,
                          certificates=certificates)


def _close(a, b, rel=1e-9):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def verify_operator_certificate(certificate, T, config=None, h=None):
    """
    Replay a certificate against a MatrixOperator

    Args:
        h: orbit vector, needed for WeaklyClosedOrbit certificates

    Returns:
        True when the certificate re-verifies
    """
    config = build_config(config)
    witnesses = certificate.witnesses
    kind = certificate.kind

    if kind == CertificateKind.NO_LAMBDA_EXISTS:
        return not kernel_inclusion(T, config)

    if kind == CertificateKind.WEAKLY_CLOSED_ORBIT:
        if h is None:
            return False
        if certificate.theorem == WEAKLY_CLOSED_ORBIT:
            replay = weakly_closed_orbit_certificate(T, h, config)
            if replay is None or not _close(replay.witnesses["c"], witnesses["c"]):
                return False
            if "log_growth_floor" not in witnesses:
                return True
            N = witnesses["floor_n"]
            reached = orbit_norms(T, h, N)[N]
            return (_close(replay.witnesses["log_growth_floor"], witnesses["log_growth_floor"])
                    and reached > 0.0
                    and math.log(reached) >= witnesses["log_growth_floor"]
                    + math.log(1.0 - config["orbit_slack"]))
        if certificate.theorem == GEOMETRIC_GROWTH:
            norms = orbit_norms(T, h, witnesses["n_checked"])[1:]
            c = witnesses["c"]
            floors = c ** np.arange(1, norms.size + 1)
            return c > 1.0 and bool(np.all(norms >= floors * (1.0 - config["orbit_slack"])))
        return False

    if kind == CertificateKind.NOT_WEAKLY_HYPERCYCLIC and certificate.theorem == CONTRACTIVE_FACTOR:
        factorization = douglas_factor(T, config)
        return (factorization.feasible and _close(factorization.norm, witnesses["factor_norm"])
                and factorization.norm <= 1.0 + config["lambda_tol"])

    lam = witnesses["lambda"]
    if lam == 0.0:
        return T.is_zero
    if not is_lambda_hyponormal(T, lam * (1.0 + config["lambda_tol"]), config):
        return False
    if kind == CertificateKind.LAMBDA_HYPONORMAL:
        return _close(minimal_lambda(T, config), lam, rel=1e-6)
    if kind == CertificateKind.NOT_WEAKLY_HYPERCYCLIC:
        return lam <= 1.0 + config["lambda_tol"]
    return False

"""
Dense Operators
Finite-dimensional complex operators on Cⁿ with an optional mass-weighted
inner product ⟨a,b⟩ = Σ a_k conj(b_k) m_k.

Weighted operators are transported to standard coordinates (f_k ↦ f_k√m_k)
before any spectral decision, so adjoints and norms become the standard ones.

Decisions:
- is_lambda_hyponormal: λ T†T − TT† ⪰ 0, tested on the Jacobi-scaled pencil
- minimal_lambda: range gate Ker(T) ⊆ Ker(T†), then geometric bisection
- douglas_factor: T = T†C with the minimal-norm C; ‖C‖² = minimal λ
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from certificates.certificate import (Certificate, CertificateKind, CONTRACTIVE_FACTOR)
from measure.discrete_space import DiscreteMeasureSpace
from utils.config import build_config
from utils.errors import ConsistencyError, InputError

logger = logging.getLogger(__name__)

# Relative residual for subspace inclusion tests (singular vectors are exact to ~eps)
RANGE_INCLUSION_TOL = 1e-6

# Finite nonzero operators satisfy λ_min ≥ 1 (trace equality)
FINITE_LAMBDA_FLOOR = 1.0 - 1e-10

# Hermitian residual tolerated on the Gram matrices, relative to their largest entry
HERMITIAN_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MatrixOperator:
    """
    Square complex operator, (Tf)_i = Σ_j entries[i, j] f_j

    Attributes:
        entries: read-only dim×dim complex array
        masses: read-only positive weights, or None for the standard inner product
    """

    entries: np.ndarray
    masses: np.ndarray = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise InputError(f"operator must be a non-empty square matrix, got shape {entries.shape}",
                             location="entries")
        if not np.all(np.isfinite(entries)):
            raise InputError("operator entries must be finite", location="entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

        if self.masses is not None:
            masses = DiscreteMeasureSpace(self.masses).masses
            if masses.size != entries.shape[0]:
                raise InputError(f"masses has length {masses.size}, expected {entries.shape[0]}",
                                 location="masses")
            object.__setattr__(self, "masses", masses)

    @classmethod
    def identity(cls, dim, masses=None):
        return cls(np.eye(dim), masses)

    @classmethod
    def diagonal(cls, values, masses=None):
        return cls(np.diag(np.asarray(values, dtype=complex)), masses)

    @property
    def dim(self):
        return self.entries.shape[0]

    @property
    def weighted(self):
        return self.masses is not None

    @property
    def is_zero(self):
        return not np.any(self.entries)

    def _sqrt_masses(self):
        return np.sqrt(self.masses) if self.weighted else np.ones(self.dim)

    def vector(self, x, role="vector"):
        x = np.asarray(x, dtype=complex)
        if x.ndim != 1 or x.size != self.dim:
            raise InputError(f"{role} has shape {x.shape}, expected ({self.dim},)", location=role)
        return x

    def apply(self, x):
        return self.entries @ self.vector(x)

    def adjoint(self):
        """M⁻¹ A^H M in weighted coordinates, conjugate transpose otherwise"""
        if not self.weighted:
            return MatrixOperator(self.entries.conj().T)
        m = self.masses
        return MatrixOperator(self.entries.conj().T * m[np.newaxis, :] / m[:, np.newaxis], m)

    def to_standard(self):
        """D A D⁻¹ with D = diag √m; unitarily equivalent, standard inner product"""
        if not self.weighted:
            return self
        d = self._sqrt_masses()
        return MatrixOperator(self.entries * d[:, np.newaxis] / d[np.newaxis, :])

    def from_standard_vector(self, x):
        return np.asarray(x) / self._sqrt_masses()

    def to_standard_vector(self, x):
        return self.vector(x) * self._sqrt_masses()

    def inner(self, a, b):
        a, b = self.vector(a), self.vector(b)
        if not self.weighted:
            return complex(np.vdot(b, a))
        return complex(np.sum(a * b.conj() * self.masses))

    def vector_norm(self, x):
        return float(np.linalg.norm(self.to_standard_vector(x)))

    def operator_norm(self):
        return float(np.linalg.norm(self.to_standard().entries, 2))


def adjoint(T):
    return T.adjoint()


def vector_norm(T, x):
    return T.vector_norm(x)


def operator_norm(T):
    return T.operator_norm()


def _gram_pair(T):
    """B = T†T and C = TT† in standard coordinates"""
    S = T.to_standard().entries
    return S.conj().T @ S, S @ S.conj().T


def _hermitian(X, label):
    scale = max(float(np.abs(X).max()), np.finfo(float).tiny)
    residual = float(np.abs(X - X.conj().T).max())
    if residual > HERMITIAN_RESIDUAL_TOL * scale:
        raise ConsistencyError(f"{label} is not Hermitian (residual {residual:.3g}, scale {scale:.3g})")
    return _symmetrized(X)


def _symmetrized(X):
    return (X + X.conj().T) / 2


def _pencil_is_psd(B, C, lam, psd_tol):
    """
    λB − C ⪰ 0 with Jacobi scaling by diag(B)

    Indices with B_kk = 0 are columns of T in the kernel; there the pencil
    reduces to −C, so PSD needs C_kk = 0.
    """
    diag_B = np.real(np.diag(B))
    diag_C = np.real(np.diag(C))
    scale = max(float(diag_B.max()), float(diag_C.max()))
    if scale == 0.0:
        return True

    null = diag_B <= psd_tol * scale
    if np.any(diag_C[null] > psd_tol * scale):
        return False
    keep = np.flatnonzero(~null)
    if keep.size == 0:
        return True

    d = 1.0 / np.sqrt(diag_B[keep])
    B_scaled = B[np.ix_(keep, keep)] * d[:, np.newaxis] * d[np.newaxis, :]
    C_scaled = C[np.ix_(keep, keep)] * d[:, np.newaxis] * d[np.newaxis, :]
    # λB − C is pure roundoff for normal T at λ = 1
    B_scaled = _symmetrized(B_scaled)
    pencil = _symmetrized(lam * B_scaled - _symmetrized(C_scaled))

    lowest = float(np.linalg.eigvalsh(pencil)[0])
    spectral = float(np.linalg.eigvalsh(B_scaled)[-1])
    return lowest >= -psd_tol * max(lam, 1.0) * spectral


def is_lambda_hyponormal(T, lam, config=None):
    """
    Check T†T ≥ (1/λ) TT†

    Args:
        T: MatrixOperator
        lam: λ > 0
        config: config overrides (psd_tol)

    Returns:
        True when λT†T − TT† is PSD within the relative tolerance
    """
    config = build_config(config)
    if not (lam > 0 and math.isfinite(lam)):
        raise InputError(f"λ must be positive and finite, got {lam!r}", location="lambda")
    B, C = _gram_pair(T)
    return _pencil_is_psd(_hermitian(B, "T†T"), _hermitian(C, "TT†"), float(lam), config["psd_tol"])


def _singular_split(S, rank_tol):
    U, s, Vh = np.linalg.svd(S)
    s_max = float(s[0]) if s.size else 0.0
    rank = int(np.sum(s > rank_tol * s_max)) if s_max > 0 else 0
    return U, s, Vh, s_max, rank


def kernel_inclusion(T, config=None):
    """Ker(T) ⊆ Ker(T†), equivalently R(T) ⊆ R(T†)"""
    config = build_config(config)
    S = T.to_standard().entries
    U, s, Vh, s_max, rank = _singular_split(S, config["rank_tol"])
    if rank == 0:
        return True
    kernel = Vh[rank:].conj().T
    if kernel.shape[1] == 0:
        return True
    leak = np.linalg.norm(S.conj().T @ kernel, 2)
    return bool(leak <= RANGE_INCLUSION_TOL * s_max)


def minimal_lambda(T, config=None):
    """
    Smallest λ with λT†T − TT† PSD

    Bracket [max(1, max_k C_kk/B_kk), 1 + ‖TT†‖/σ⁺_min(T†T)], refined by
    geometric bisection to bisection_rel_width. The returned value is the
    feasible end of the bracket.

    Returns:
        0.0 for the zero operator, +∞ when Ker(T) ⊄ Ker(T†) or the bracket
        does not close, else the minimal λ
    """
    config = build_config(config)
    psd_tol = config["psd_tol"]
    S = T.to_standard().entries
    U, s, Vh, s_max, rank = _singular_split(S, config["rank_tol"])
    if rank == 0:
        logger.info("Zero operator: λ-hyponormal for every λ > 0")
        return 0.0

    if not kernel_inclusion(T, config):
        logger.info("Ker(T) ⊄ Ker(T†): no λ exists")
        return math.inf

    B = _hermitian(S.conj().T @ S, "T†T")
    C = _hermitian(S @ S.conj().T, "TT†")
    diag_B = np.real(np.diag(B))
    diag_C = np.real(np.diag(C))
    live = diag_B > psd_tol * max(float(diag_B.max()), float(diag_C.max()))
    lo = max(1.0, float(np.max(diag_C[live] / diag_B[live])) if np.any(live) else 1.0)
    if _pencil_is_psd(B, C, lo, psd_tol):
        logger.debug(f"Lower bracket {lo:.12g} is feasible")
        return _checked(lo)

    hi = 1.0 + s_max ** 2 / float(s[rank - 1]) ** 2
    if not _pencil_is_psd(B, C, hi, psd_tol):
        logger.warning(f"Bisection bracket [{lo:.6g}, {hi:.6g}] does not close; reporting +∞")
        return math.inf

    for iteration in range(config["bisection_max_iter"]):
        if hi / lo - 1.0 <= config["bisection_rel_width"]:
            break
        mid = math.sqrt(lo * hi)
        if _pencil_is_psd(B, C, mid, psd_tol):
            hi = mid
        else:
            lo = mid
        logger.debug(f"bisection {iteration}: [{lo:.15g}, {hi:.15g}]")
    return _checked(hi)


def _checked(lam):
    if lam < FINITE_LAMBDA_FLOOR:
        raise ConsistencyError(f"finite nonzero operator reports minimal λ = {lam!r} < 1")
    return float(lam)


@dataclass
class FactorizationResult:
    """
    Douglas factorization T = T†C

    Attributes:
        feasible: R(T) ⊆ R(T†)
        factor: C as a MatrixOperator (same inner product as T), when feasible
        norm: ‖C‖
        implied_lambda: ‖C‖²
        residual: ‖T†C − T‖ / ‖T‖
        violating_vector: range vector of T outside R(T†), when infeasible
        certificate: NotWeaklyHypercyclic when ‖C‖ ≤ 1 + tol
    """

    feasible: bool
    factor: MatrixOperator = None
    norm: float = None
    implied_lambda: float = math.inf
    residual: float = None
    violating_vector: np.ndarray = None
    certificate: Certificate = None


def douglas_factor(T, config=None):
    """
    Minimal-norm solution of T = T†C

    Returns:
        FactorizationResult

    Raises:
        ConsistencyError: the factor residual or the PSD cross-check at ‖C‖² fails
    """
    config = build_config(config)
    S = T.to_standard().entries
    U, s, Vh, s_max, rank = _singular_split(S, config["rank_tol"])
    if rank == 0:
        factor = MatrixOperator(np.zeros_like(S), T.masses)
        certificate = Certificate(kind=CertificateKind.NOT_WEAKLY_HYPERCYCLIC,
                                  theorem=CONTRACTIVE_FACTOR,
                                  witnesses={"lambda": 0.0, "factor_norm": 0.0, "degenerate": True})
        return FactorizationResult(feasible=True, factor=factor, norm=0.0, implied_lambda=0.0,
                                   residual=0.0, certificate=certificate)

    range_T = U[:, :rank]
    range_T_star = Vh[:rank].conj().T
    outside = range_T - range_T_star @ (range_T_star.conj().T @ range_T)
    leaks = np.linalg.norm(outside, axis=0)
    if float(np.linalg.norm(outside, 2)) > RANGE_INCLUSION_TOL:
        worst = int(np.argmax(leaks))
        logger.info(f"R(T) ⊄ R(T†): range vector leaks {leaks[worst]:.3g} outside R(T†)")
        return FactorizationResult(feasible=False,
                                   violating_vector=T.from_standard_vector(range_T[:, worst]))

    # pinv(S†) = U_r Σ_r⁻¹ V_r^H
    factor_std = (range_T / s[:rank]) @ (range_T_star.conj().T @ S)
    residual = float(np.linalg.norm(S.conj().T @ factor_std - S, 2)) / s_max
    if residual > RANGE_INCLUSION_TOL:
        raise ConsistencyError(f"Douglas factor residual {residual:.3g} exceeds tolerance")

    norm = float(np.linalg.norm(factor_std, 2))
    implied = norm ** 2
    if not is_lambda_hyponormal(T, implied * (1.0 + config["lambda_tol"]), config):
        raise ConsistencyError(f"T is not λ-hyponormal at λ = ‖C‖² = {implied!r}")

    if T.weighted:
        d = T._sqrt_masses()
        factor = MatrixOperator(factor_std / d[:, np.newaxis] * d[np.newaxis, :], T.masses)
    else:
        factor = MatrixOperator(factor_std)

    certificate = None
    if norm <= 1.0 + config["lambda_tol"]:
        certificate = Certificate(kind=CertificateKind.NOT_WEAKLY_HYPERCYCLIC,
                                  theorem=CONTRACTIVE_FACTOR,
                                  witnesses={"lambda": implied, "factor_norm": norm})
        logger.info(f"✓ Contractive Douglas factor, ‖C‖ = {norm:.12g}")
    return FactorizationResult(feasible=True, factor=factor, norm=norm, implied_lambda=implied,
                               residual=residual, certificate=certificate)

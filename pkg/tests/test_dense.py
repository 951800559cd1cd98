import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from certificates.certificate import CONTRACTIVE_FACTOR, Certificate, CertificateKind
import dense.analysis
from dense.analysis import (analyze_operator, not_weakly_hypercyclic_certificate,
                            verify_operator_certificate)
from dense.matrix_operator import (FactorizationResult, MatrixOperator, adjoint, douglas_factor,
                                   is_lambda_hyponormal, kernel_inclusion, minimal_lambda,
                                   operator_norm, vector_norm)
from utils.errors import ConsistencyError, InputError
from .conftest import random_operator, random_unitary

NILPOTENT = [[0.0, 1.0], [0.0, 0.0]]


def rotated_normal(seed, eigenvalues):
    """Q diag(eigenvalues) Q† for a random unitary Q"""
    Q = random_unitary(seed, len(eigenvalues))
    return MatrixOperator(Q @ np.diag(np.asarray(eigenvalues, dtype=complex)) @ Q.conj().T)


@pytest.fixture
def cycle_matrix():
    # the 3-cycle system with u = (1, 2, 4) as a matrix
    return MatrixOperator([[0.0, 1.0, 0.0], [0.0, 0.0, 2.0], [4.0, 0.0, 0.0]])


class TestMatrixOperator:

    @pytest.mark.parametrize("entries", [[[1.0, 2.0]], [], [[np.nan]]])
    def test_rejects_bad_entries(self, entries):
        with pytest.raises(InputError):
            MatrixOperator(entries)

    def test_rejects_bad_masses(self):
        with pytest.raises(InputError):
            MatrixOperator(np.eye(2), [1.0, 0.0])
        with pytest.raises(InputError):
            MatrixOperator(np.eye(2), [1.0, 1.0, 1.0])

    def test_vector_shape_checked(self):
        with pytest.raises(InputError):
            MatrixOperator.identity(3).apply([1.0, 2.0])

    def test_standard_adjoint(self):
        T = MatrixOperator([[1.0 + 2.0j, 3.0], [0.0, 4.0j]])
        assert_allclose(adjoint(T).entries, [[1.0 - 2.0j, 0.0], [3.0, -4.0j]])

    def test_weighted_adjoint(self):
        T = MatrixOperator(NILPOTENT, [1.0, 2.0])
        assert_allclose(adjoint(T).entries, [[0.0, 0.0], [0.5, 0.0]])

    @given(st.integers(0, 10_000), st.booleans())
    def test_adjoint_is_an_involution(self, seed, weighted):
        T = random_operator(seed, weighted=weighted)
        assert_allclose(adjoint(adjoint(T)).entries, T.entries, rtol=1e-12, atol=1e-12)

    @given(st.integers(0, 10_000), st.booleans())
    def test_adjoint_identity(self, seed, weighted):
        T = random_operator(seed, weighted=weighted)
        rng = np.random.default_rng(seed + 1)
        x, y = rng.standard_normal((2, T.dim)) + 1j * rng.standard_normal((2, T.dim))
        lhs = T.inner(T.apply(x), y)
        rhs = T.inner(x, adjoint(T).apply(y))
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))

    def test_weighted_norms(self):
        T = MatrixOperator.diagonal([2.0, 3.0], [4.0, 1.0])
        assert vector_norm(T, [1.0, 1.0]) == pytest.approx(math.sqrt(5.0))
        assert operator_norm(T) == pytest.approx(3.0)


class TestIsLambdaHyponormal:

    def test_normal_operator(self):
        T = MatrixOperator.diagonal([1.0, 2.0])
        assert is_lambda_hyponormal(T, 1.0)

    @pytest.mark.parametrize("lam", [1.0, 10.0, 1e6])
    def test_nilpotent_never(self, lam):
        assert not is_lambda_hyponormal(MatrixOperator(NILPOTENT), lam)

    def test_cycle_threshold(self, cycle_matrix):
        assert is_lambda_hyponormal(cycle_matrix, 4.0)
        assert not is_lambda_hyponormal(cycle_matrix, 3.99)

    @pytest.mark.parametrize("lam", [0.0, -1.0, math.inf, math.nan])
    def test_lambda_must_be_positive_and_finite(self, lam):
        with pytest.raises(InputError):
            is_lambda_hyponormal(MatrixOperator.identity(2), lam)

    def test_zero_operator(self):
        assert is_lambda_hyponormal(MatrixOperator(np.zeros((3, 3))), 0.5)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    @pytest.mark.parametrize("eigenvalues", [[1.0, 2.0, 3.0], [1.0, 0.0, 0.0], [1j, -2.0, 0.0]])
    def test_rotated_normal_operator(self, seed, eigenvalues):
        assert is_lambda_hyponormal(rotated_normal(seed, eigenvalues), 1.0)


class TestMinimalLambda:

    def test_normal(self):
        assert minimal_lambda(MatrixOperator.diagonal([1.0, 2.0])) == 1.0

    def test_nilpotent(self):
        T = MatrixOperator(NILPOTENT)
        assert math.isinf(minimal_lambda(T))
        assert not kernel_inclusion(T)

    def test_cycle(self, cycle_matrix):
        assert minimal_lambda(cycle_matrix) == pytest.approx(4.0, rel=1e-9)

    def test_zero(self):
        assert minimal_lambda(MatrixOperator(np.zeros((2, 2)))) == 0.0

    def test_unitary(self):
        assert minimal_lambda(MatrixOperator(random_unitary(3, 4))) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_rank_one_normal(self, seed):
        T = rotated_normal(seed, [2.0, 0.0, 0.0, 0.0])
        assert kernel_inclusion(T)
        assert minimal_lambda(T) == pytest.approx(1.0, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 5), st.integers(1, 5))
    def test_normal_operators_have_lambda_one(self, seed, dim, rank):
        rng = np.random.default_rng(seed)
        eigenvalues = rng.uniform(0.5, 3.0, dim) * np.exp(2j * np.pi * rng.uniform(size=dim))
        eigenvalues[min(rank, dim):] = 0.0
        T = rotated_normal(seed + 1, eigenvalues)
        assert minimal_lambda(T) == pytest.approx(1.0, abs=1e-9)
        assert not_weakly_hypercyclic_certificate(T) is not None

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_unitary_rotation_leaves_lambda_unchanged(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 6))
        # singular values in [1, 3] keep the pencil well conditioned
        singular = np.diag(rng.uniform(1.0, 3.0, dim))
        T = MatrixOperator(random_unitary(seed + 1, dim) @ singular @ random_unitary(seed + 2, dim))
        Q = random_unitary(seed + 3, dim)
        rotated = MatrixOperator(Q @ T.entries @ Q.conj().T)
        assert minimal_lambda(rotated) == pytest.approx(minimal_lambda(T), rel=1e-6)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_minimal_lambda_is_a_threshold(self, seed):
        T = random_operator(seed)
        lam = minimal_lambda(T)
        assert lam >= 1.0 - 1e-10
        assert is_lambda_hyponormal(T, lam * (1.0 + 1e-6))
        assert not is_lambda_hyponormal(T, lam * (1.0 - 1e-6))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_weighted_and_standard_coordinates_agree(self, seed):
        T = random_operator(seed, weighted=True)
        standard = T.to_standard()
        assert not standard.weighted
        assert minimal_lambda(T) == pytest.approx(minimal_lambda(standard), rel=1e-9)


class TestDouglasFactor:

    def test_normal_operator_factor_is_unitary(self):
        result = douglas_factor(MatrixOperator.diagonal([1.0, 2.0]))
        assert result.feasible
        assert_allclose(result.factor.entries, np.eye(2), atol=1e-12)
        assert result.certificate.theorem == CONTRACTIVE_FACTOR

    def test_unitary_factor_is_its_square(self):
        U = random_unitary(11, 3)
        result = douglas_factor(MatrixOperator(U))
        assert_allclose(result.factor.entries, U @ U, atol=1e-10)
        assert result.norm == pytest.approx(1.0)

    def test_nilpotent_is_infeasible(self):
        result = douglas_factor(MatrixOperator(NILPOTENT))
        assert not result.feasible
        assert math.isinf(result.implied_lambda)
        vector = np.abs(result.violating_vector)
        assert_allclose(vector, [1.0, 0.0], atol=1e-12)

    def test_zero_operator(self):
        result = douglas_factor(MatrixOperator(np.zeros((2, 2))))
        assert result.feasible
        assert result.norm == 0.0
        assert result.certificate.witnesses["degenerate"]

    def test_cycle_factor_norm_squared(self, cycle_matrix):
        result = douglas_factor(cycle_matrix)
        assert result.implied_lambda == pytest.approx(4.0, rel=1e-9)
        assert result.certificate is None

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.booleans())
    def test_factor_norm_matches_minimal_lambda(self, seed, weighted):
        T = random_operator(seed, weighted=weighted)
        result = douglas_factor(T)
        assert result.feasible
        assert result.implied_lambda == pytest.approx(minimal_lambda(T), rel=1e-6)
        assert_allclose(adjoint(T).entries @ result.factor.entries, T.entries, atol=1e-8)


class TestOperatorAnalysis:

    def test_normal_operator(self):
        T = MatrixOperator.diagonal([1.0, 2.0])
        report = analyze_operator(T)
        kinds = [c.kind for c in report.certificates]
        assert kinds == [CertificateKind.LAMBDA_HYPONORMAL, CertificateKind.NOT_WEAKLY_HYPERCYCLIC,
                         CertificateKind.NOT_WEAKLY_HYPERCYCLIC]
        assert report.kernel_inclusion
        assert report.operator_norm == pytest.approx(2.0)

    def test_rotated_normal_operator(self):
        report = analyze_operator(rotated_normal(5, [1.0, 2.0, 3.0]))
        assert report.lambda_min == pytest.approx(1.0, abs=1e-9)
        assert report.factorization.feasible
        assert report.certificate_of(CertificateKind.NOT_WEAKLY_HYPERCYCLIC) is not None

    def test_douglas_disagreement_is_an_invariant_violation(self, monkeypatch):
        monkeypatch.setattr(dense.analysis, "douglas_factor",
                            lambda T, config=None: FactorizationResult(feasible=False))
        with pytest.raises(ConsistencyError, match="minimal λ"):
            analyze_operator(MatrixOperator.diagonal([1.0, 2.0]))

    def test_nilpotent(self):
        report = analyze_operator(MatrixOperator(NILPOTENT))
        assert math.isinf(report.lambda_min)
        assert [c.kind for c in report.certificates] == [CertificateKind.NO_LAMBDA_EXISTS]

    def test_cycle_is_inconclusive(self, cycle_matrix):
        assert not_weakly_hypercyclic_certificate(cycle_matrix) is None

    def test_zero_operator(self):
        certificate = not_weakly_hypercyclic_certificate(MatrixOperator(np.zeros((2, 2))))
        assert certificate.witnesses == {"lambda": 0.0, "degenerate": True}

    @pytest.mark.parametrize("entries", [np.diag([1.0, 2.0]), NILPOTENT, np.zeros((2, 2)),
                                         [[0.0, 1.0, 0.0], [0.0, 0.0, 2.0], [4.0, 0.0, 0.0]]])
    def test_certificates_replay(self, entries):
        T = MatrixOperator(entries)
        for certificate in analyze_operator(T).certificates:
            assert verify_operator_certificate(Certificate.from_dict(certificate.to_dict()), T)

    def test_forged_lambda_fails(self, cycle_matrix):
        forged = Certificate(kind=CertificateKind.LAMBDA_HYPONORMAL, theorem="dense-psd-minimal-lambda",
                             witnesses={"lambda": 3.0})
        assert not verify_operator_certificate(forged, cycle_matrix)

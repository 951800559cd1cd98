import math

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from certificates.certificate import (Certificate, CertificateKind, SCOPE_EXACT, SCOPE_PREFIX,
                                      SCOPE_TAIL_ASSERTED)
from cli.documents import parse_system_document
from cli.examples import halving_window_document
from utils.errors import ConsistencyError, InputError
import wco.analysis as analysis_module
from wco.analysis import (CriterionResult, analyze_system, closed_range_check,
                          hyponormality_criterion, hypercyclicity_certificate,
                          kernel_inclusion_check, range_star_support,
                          verify_system_certificate)
from wco.operator import WeightedCompositionSystem
from .conftest import systems


@pytest.fixture
def halving_window():
    return parse_system_document(halving_window_document())


class TestCriterion:

    def test_cycle(self, cycle_system):
        result = hyponormality_criterion(cycle_system)
        assert_allclose(result.criterion, [1.0 / 16.0, 4.0, 4.0])
        assert result.lambda_min == 4.0
        assert result.argmax_index == 1
        certificate = result.certificates[0]
        assert certificate.kind == CertificateKind.LAMBDA_HYPONORMAL
        assert certificate.witnesses == {"lambda": 4.0, "argmax_index": 2}

    def test_identity_map_gives_one(self, identity_system):
        result = hyponormality_criterion(identity_system)
        assert result.lambda_min == pytest.approx(1.0)

    def test_support_gate(self, fiber_system):
        result = hyponormality_criterion(fiber_system)
        assert math.isinf(result.lambda_min)
        assert not result.finite
        assert result.violating_index == 0
        assert result.support_J.indices == (1, 2)
        certificate = result.certificates[0]
        assert certificate.kind == CertificateKind.NO_LAMBDA_EXISTS
        assert certificate.witnesses["violating_index"] == 1

    def test_zero_operator_is_degenerate(self, zero_system):
        result = hyponormality_criterion(zero_system)
        assert result.lambda_min == 0.0
        assert result.degenerate
        assert result.certificates == []

    def test_prefix_restricts_the_maximum(self, cycle_system):
        result = hyponormality_criterion(cycle_system, evaluation_window=1)
        assert result.lambda_min == pytest.approx(1.0 / 16.0)
        assert result.certificates[0].scope == SCOPE_PREFIX

    def test_prefix_out_of_range(self, cycle_system):
        with pytest.raises(InputError):
            hyponormality_criterion(cycle_system, evaluation_window=4)

    def test_halving_window_prefix(self, halving_window):
        result = hyponormality_criterion(halving_window.system,
                                         evaluation_window=halving_window.evaluation_window)
        assert result.criterion[0] == pytest.approx(0.4 + 18.0 / 41.0)
        assert 0.839 < result.lambda_min < 1.0
        assert result.argmax_index < halving_window.evaluation_window

    @settings(max_examples=80)
    @given(systems())
    def test_finite_nonzero_systems_are_at_least_one(self, sys):
        result = hyponormality_criterion(sys)
        if result.finite and not result.degenerate:
            assert result.lambda_min >= 1.0 - 1e-10


class TestClosedRange:

    def test_cycle(self, cycle_system):
        result = closed_range_check(cycle_system)
        assert result.delta == 1.0
        assert result.preimage_invariant
        assert result.growth_holds
        assert list(result.growth_table.columns) == ["n", "min_Jn_on_SJ", "delta_pow_n", "holds"]
        assert result.certificate.witnesses["growth_checked_to"] == 10

    def test_preimage_not_invariant(self, fiber_system_unit_weight):
        result = closed_range_check(fiber_system_unit_weight)
        assert not result.degenerate
        assert result.delta == pytest.approx(0.5)
        assert not result.preimage_invariant
        assert result.certificate.witnesses["growth_checked_to"] == 0

    def test_zero_operator(self, zero_system):
        result = closed_range_check(zero_system)
        assert result.degenerate
        assert result.closed_range
        assert result.certificate is None

    def test_growth_failure_under_invariance_is_a_bug(self, cycle_system):
        table = [np.array([16.0, 2.0, 4.0])] + [np.full(3, 1e-3)] * 9
        with pytest.raises(ConsistencyError):
            closed_range_check(cycle_system, Jn_table=table)

    @settings(max_examples=60)
    @given(systems())
    def test_invariant_preimage_implies_growth(self, sys):
        result = closed_range_check(sys)
        if not result.degenerate and result.preimage_invariant:
            assert result.growth_holds


class TestKernelsAndRanges:

    def test_kernel_inclusion(self, cycle_system, fiber_system, zero_system):
        assert kernel_inclusion_check(cycle_system)
        assert not kernel_inclusion_check(fiber_system)
        assert kernel_inclusion_check(zero_system)

    def test_range_star_support(self, fiber_system):
        assert range_star_support(fiber_system).one_based() == [2, 3]

    @given(systems())
    def test_kernel_inclusion_matches_finiteness(self, sys):
        assert kernel_inclusion_check(sys) == (hyponormality_criterion(sys).finite)


class TestHypercyclicity:

    def test_identity_certifies(self, identity_system):
        certificate = hypercyclicity_certificate(identity_system)
        assert certificate.kind == CertificateKind.NOT_WEAKLY_HYPERCYCLIC
        assert certificate.scope == SCOPE_EXACT
        assert certificate.witnesses["lambda"] == pytest.approx(1.0)

    def test_cycle_is_inconclusive(self, cycle_system):
        assert hypercyclicity_certificate(cycle_system) is None

    def test_no_lambda_is_inconclusive(self, fiber_system):
        assert hypercyclicity_certificate(fiber_system) is None

    def test_zero_operator_is_degenerate(self, zero_system):
        certificate = hypercyclicity_certificate(zero_system)
        assert certificate.witnesses == {"lambda": 0.0, "degenerate": True}

    def test_prefix_scope(self, halving_window):
        certificate = hypercyclicity_certificate(halving_window.system,
                                                 evaluation_window=halving_window.evaluation_window)
        assert certificate.scope == SCOPE_PREFIX
        assert certificate.witnesses["exact_prefix"] == 100
        assert "tail_bound" not in certificate.witnesses

    def test_tail_asserted_scope(self, halving_window):
        certificate = hypercyclicity_certificate(halving_window.system,
                                                 {"tail_bound_asserted": True},
                                                 halving_window.evaluation_window)
        assert certificate.scope == SCOPE_TAIL_ASSERTED
        assert certificate.witnesses["tail_bound"] == 1.0


class TestAnalyzeSystem:

    def test_cycle(self, cycle_system):
        report = analyze_system(cycle_system)
        assert report.scope == SCOPE_EXACT
        assert report.lambda_min == 4.0
        assert report.kernel_inclusion
        assert report.Jn_direct_discrepancy <= 1e-12
        assert len(report.Jn_table) == 6
        assert report.certificate_of(CertificateKind.NOT_WEAKLY_HYPERCYCLIC) is None
        assert report.certificate_of(CertificateKind.CLOSED_RANGE) is not None

    def test_halving_window(self, halving_window):
        report = analyze_system(halving_window.system, halving_window.options,
                                halving_window.evaluation_window)
        assert report.scope == SCOPE_PREFIX
        assert report.lambda_min < 1.0
        assert not report.closed_range.preimage_invariant
        not_hypercyclic = report.certificate_of(CertificateKind.NOT_WEAKLY_HYPERCYCLIC)
        assert not_hypercyclic.scope == SCOPE_PREFIX

    def test_zero_operator(self, zero_system):
        report = analyze_system(zero_system)
        assert report.lambda_min == 0.0
        assert report.closed_range.degenerate
        kinds = [c.kind for c in report.certificates]
        assert kinds == [CertificateKind.NOT_WEAKLY_HYPERCYCLIC]

    def test_lambda_below_one_is_a_bug(self, cycle_system, monkeypatch):
        def broken(sys, config=None, evaluation_window=None):
            return CriterionResult(criterion=np.full(sys.n_points, 0.5), lambda_min=0.5,
                                   argmax_index=0, support_u=None, support_J=None)
        monkeypatch.setattr(analysis_module, "hyponormality_criterion", broken)
        with pytest.raises(ConsistencyError):
            analyze_system(cycle_system)


class TestVerifyCertificates:

    def test_cycle_certificates_replay(self, cycle_system):
        report = analyze_system(cycle_system)
        for certificate in report.certificates:
            replayed = Certificate.from_dict(certificate.to_dict())
            assert verify_system_certificate(replayed, cycle_system)

    def test_support_gate_replays(self, fiber_system):
        report = analyze_system(fiber_system)
        assert report.certificates[0].kind == CertificateKind.NO_LAMBDA_EXISTS
        for certificate in report.certificates:
            assert verify_system_certificate(certificate, fiber_system)

    def test_tampered_lambda_fails(self, cycle_system):
        certificate = hyponormality_criterion(cycle_system).certificates[0]
        forged = Certificate(kind=certificate.kind, theorem=certificate.theorem,
                             witnesses={**certificate.witnesses, "lambda": 3.0})
        assert not verify_system_certificate(forged, cycle_system)

    def test_scope_must_match(self, halving_window):
        report = analyze_system(halving_window.system, halving_window.options,
                                halving_window.evaluation_window)
        certificate = report.certificate_of(CertificateKind.NOT_WEAKLY_HYPERCYCLIC)
        assert verify_system_certificate(certificate, halving_window.system,
                                         evaluation_window=halving_window.evaluation_window)
        assert not verify_system_certificate(certificate, halving_window.system,
                                             {"tail_bound_asserted": True},
                                             halving_window.evaluation_window)

    def test_certificate_fails_on_another_system(self, cycle_system):
        certificate = hyponormality_criterion(cycle_system).certificates[0]
        other = WeightedCompositionSystem.from_arrays([1.0, 1.0, 1.0], [1, 2, 0], [1.0, 1.0, 1.0])
        assert not verify_system_certificate(certificate, other)

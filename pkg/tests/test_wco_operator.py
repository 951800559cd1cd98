import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose, assert_array_equal

from measure.discrete_space import radon_nikodym_h
from utils.errors import InputError
from wco.operator import (WeightedCompositionSystem, apply_W, apply_W_power, apply_W_star,
                          apply_WW_star, compute_J, compute_Jn_direct, compute_Jn_recursive,
                          compute_Jn_table, compute_modulus, compute_u_n)
from .conftest import systems


class TestWeightedCompositionSystem:

    def test_negative_weight_rejected(self):
        with pytest.raises(InputError) as excinfo:
            WeightedCompositionSystem.from_arrays([1.0, 1.0], [0, 1], [1.0, -0.5])
        assert excinfo.value.location == "u[2]"

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            WeightedCompositionSystem.from_arrays([1.0, 1.0], [0, 1], [1.0])

    def test_power_carries_u_n(self, cycle_system):
        squared = cycle_system.power(2)
        assert_array_equal(squared.phi, [2, 0, 1])
        assert_allclose(squared.u, [2.0, 8.0, 4.0])


class TestApply:

    def test_W_on_cycle(self, cycle_system):
        assert_allclose(apply_W(cycle_system, [1.0, 10.0, 100.0]), [10.0, 200.0, 4.0])

    def test_W_star_of_one(self, cycle_system):
        assert_allclose(apply_W_star(cycle_system, np.ones(3)), [4.0, 1.0, 2.0])

    def test_W_star_on_fibers(self, fiber_system_unit_weight):
        # (1/m_k) Σ_{φ(j)=k} u_j f_j m_j with m = (1, 2, 1)
        result = apply_W_star(fiber_system_unit_weight, [1.0, 2.0, 4.0])
        assert_allclose(result, [0.0, 0.5, 8.0])

    def test_WW_star_is_composition(self, fiber_system):
        f = np.array([3.0, -1.0, 2.0])
        assert_allclose(apply_WW_star(fiber_system, f),
                        apply_W(fiber_system, apply_W_star(fiber_system, f)))

    def test_WW_star_kills_functions_off_S_u(self, fiber_system):
        assert_allclose(apply_WW_star(fiber_system, [0.0, 5.0, 0.0]), np.zeros(3))

    def test_W_power(self, cycle_system):
        f = np.array([1.0, 2.0, 3.0])
        expected = compute_u_n(cycle_system, 3) * f[cycle_system.map.power(3).phi]
        assert_allclose(apply_W_power(cycle_system, f, 3), expected)
        assert_allclose(apply_W_power(cycle_system, f, 0), f)

    @given(systems())
    def test_adjoint_identity(self, sys):
        rng = np.random.default_rng(sys.n_points)
        f, g = rng.standard_normal((2, sys.n_points))
        lhs = sys.space.inner(apply_W(sys, f), g)
        rhs = sys.space.inner(f, apply_W_star(sys, g))
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    @given(systems())
    def test_norm_identity(self, sys):
        f = np.linspace(-1.0, 2.0, sys.n_points)
        lhs = sys.space.norm(apply_W(sys, f)) ** 2
        rhs = float(np.sum(compute_J(sys) * f ** 2 * sys.masses))
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    @given(systems())
    def test_WW_star_matches_composition(self, sys):
        f = np.cos(np.arange(sys.n_points))
        assert_allclose(apply_WW_star(sys, f), apply_W(sys, apply_W_star(sys, f)),
                        rtol=1e-10, atol=1e-10)


class TestJ:

    def test_cycle(self, cycle_system):
        assert_allclose(compute_J(cycle_system), [16.0, 1.0, 4.0])
        assert_allclose(compute_modulus(cycle_system), [4.0, 1.0, 2.0])

    def test_fiber_example(self, fiber_system):
        assert_allclose(compute_J(fiber_system), [0.0, 0.5, 1.0])

    def test_unit_weight_gives_h(self, fiber_system_unit_weight):
        sys = fiber_system_unit_weight
        assert_allclose(compute_J(sys), radon_nikodym_h(sys.space, sys.map))

    def test_u_n(self, cycle_system):
        assert_allclose(compute_u_n(cycle_system, 0), np.ones(3))
        assert_allclose(compute_u_n(cycle_system, 2), [2.0, 8.0, 4.0])

    def test_J2_on_cycle(self, cycle_system):
        assert_allclose(compute_Jn_recursive(cycle_system, 2), [64.0, 16.0, 4.0])
        assert_allclose(compute_Jn_direct(cycle_system, 2), [64.0, 16.0, 4.0])

    def test_table_layout(self, cycle_system):
        table = compute_Jn_table(cycle_system, 3)
        assert len(table) == 3
        assert_allclose(table[0], compute_J(cycle_system))
        # three steps around the cycle multiply by 1·4·16
        assert_allclose(table[2], [64.0, 64.0, 64.0])

    @pytest.mark.parametrize("n", [0, -1, 1.5])
    def test_order_must_be_positive_integer(self, cycle_system, n):
        with pytest.raises(InputError):
            compute_Jn_recursive(cycle_system, n)

    @settings(max_examples=60)
    @given(systems())
    def test_recursive_and_direct_agree(self, sys):
        for n in range(1, 9):
            recursive = compute_Jn_recursive(sys, n)
            direct = compute_Jn_direct(sys, n)
            scale = max(1.0, float(np.abs(direct).max()))
            assert np.abs(recursive - direct).max() <= 1e-10 * scale

    @settings(max_examples=60)
    @given(systems())
    def test_Jn_is_norm_of_Wn(self, sys):
        f = 1.0 + np.arange(sys.n_points) / sys.n_points
        for n in (1, 2, 3):
            lhs = sys.space.norm(apply_W_power(sys, f, n)) ** 2
            rhs = float(np.sum(compute_Jn_recursive(sys, n) * f ** 2 * sys.masses))
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from dense.matrix_operator import MatrixOperator
from wco.operator import WeightedCompositionSystem

# Bisection and SVD examples run longer than the default deadline
settings.register_profile("numerics", deadline=None)
settings.load_profile("numerics")


@pytest.fixture
def cycle_system():
    """3-cycle 1 → 2 → 3 → 1 with u = (1, 2, 4), m ≡ 1"""
    return WeightedCompositionSystem.from_arrays([1.0, 1.0, 1.0], [1, 2, 0], [1.0, 2.0, 4.0])


@pytest.fixture
def fiber_system():
    """m = (1, 2, 1), φ = (2, 3, 3) in 1-based indices, u = (1, 0, 1)"""
    return WeightedCompositionSystem.from_arrays([1.0, 2.0, 1.0], [1, 2, 2], [1.0, 0.0, 1.0])


@pytest.fixture
def fiber_system_unit_weight():
    return WeightedCompositionSystem.from_arrays([1.0, 2.0, 1.0], [1, 2, 2], [1.0, 1.0, 1.0])


@pytest.fixture
def identity_system():
    return WeightedCompositionSystem.from_arrays([1.0, 3.0, 0.5], [0, 1, 2], [1.0, 2.0, 3.0])


@pytest.fixture
def zero_system():
    return WeightedCompositionSystem.from_arrays([1.0, 2.0], [1, 0], [0.0, 0.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@st.composite
def systems(draw, max_points=8, allow_zero_weights=True):
    """Random finite systems for property tests"""
    n = draw(st.integers(min_value=1, max_value=max_points))
    masses = draw(st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=n, max_size=n))
    phi = draw(st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n, max_size=n))
    weight = st.floats(min_value=0.5, max_value=2.0)
    if allow_zero_weights:
        weight = st.one_of(st.just(0.0), weight)
    u = draw(st.lists(weight, min_size=n, max_size=n))
    return WeightedCompositionSystem.from_arrays(masses, phi, u)


@st.composite
def functions_on(draw, n):
    values = draw(st.lists(st.floats(min_value=-10.0, max_value=10.0), min_size=n, max_size=n))
    return np.array(values)


def random_operator(seed, dim=None, weighted=False):
    """Complex Gaussian operator, optionally with random point masses"""
    rng = np.random.default_rng(seed)
    dim = dim or int(rng.integers(2, 7))
    entries = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    masses = rng.uniform(0.1, 10.0, dim) if weighted else None
    return MatrixOperator(entries, masses)


def random_unitary(seed, dim):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))

"""
Weighted Composition Operators on ℓ²(μ)
W = M_u C_φ, (Wf)(k) = u_k f(φ(k)), on a discrete measure space.

All operator formulas reduce to the two fiber kernels of measure.discrete_space:
    W*f   = pushforward_density(u f)
    W*W   = multiplication by J = pushforward_density(u²)
    WW*f  = u (h∘φ) E(u f)
    |W|   = multiplication by √J
"""

from dataclasses import dataclass
import logging

import numpy as np

from measure.discrete_space import (DiscreteMeasureSpace, Transformation, as_real_function,
                                    pushforward_density, radon_nikodym_h,
                                    conditional_expectation)
from utils.errors import InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightedCompositionSystem:
    """
    The triple (space, φ, u) inducing W = M_u C_φ

    Attributes:
        space: DiscreteMeasureSpace
        map: Transformation
        u: non-negative weight vector
    """

    space: DiscreteMeasureSpace
    map: Transformation
    u: np.ndarray

    def __post_init__(self):
        if self.map.n_points != self.space.n_points:
            raise InputError(f"phi has {self.map.n_points} points, masses has {self.space.n_points}",
                             location="phi")
        u = as_real_function(self.u, self.space, role="u")
        negative = np.flatnonzero(u < 0)
        if negative.size:
            raise InputError(f"weight must be non-negative, got {u[negative[0]]!r}",
                             location=f"u[{negative[0] + 1}]")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def from_arrays(cls, masses, phi, u):
        """Build from plain 0-based arrays"""
        return cls(DiscreteMeasureSpace(masses), Transformation(phi), u)

    @property
    def n_points(self):
        return self.space.n_points

    @property
    def phi(self):
        return self.map.phi

    @property
    def masses(self):
        return self.space.masses

    def power(self, n):
        """The system (space, φⁿ, u_n) inducing Wⁿ"""
        return WeightedCompositionSystem(self.space, self.map.power(n), compute_u_n(self, n))


def _vector(sys, f, role="f"):
    return as_real_function(f, sys.space, role=role)


def apply_W(sys, f):
    """(Wf)(k) = u_k f(φ(k))"""
    f = _vector(sys, f)
    return sys.u * f[sys.phi]


def apply_W_star(sys, f):
    """(W*f)(k) = (1/m_k) Σ_{j∈φ⁻¹(k)} u_j f_j m_j"""
    f = _vector(sys, f)
    return pushforward_density(sys.space, sys.map, sys.u * f)


def apply_WW_star(sys, f):
    """WW*f = u (h∘φ) E(u f), evaluated from the explicit form"""
    f = _vector(sys, f)
    h = radon_nikodym_h(sys.space, sys.map)
    return sys.u * h[sys.phi] * conditional_expectation(sys.space, sys.map, sys.u * f)


def compute_J(sys):
    """J = h E(u²)∘φ⁻¹, the multiplier of W*W"""
    return pushforward_density(sys.space, sys.map, sys.u ** 2)


def compute_modulus(sys):
    """√J, the multiplier of |W|"""
    return np.sqrt(compute_J(sys))


def compute_u_n(sys, n):
    """
    u_n = Π_{i<n} u∘φⁱ, so that Wⁿf = u_n f∘φⁿ

    n = 0 gives the empty product ≡ 1.
    """
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}", location="n")
    product = np.ones(sys.n_points)
    index = np.arange(sys.n_points)
    for _ in range(n):
        product = product * sys.u[index]
        index = sys.phi[index]
    return product


def _check_order(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}", location="n")


def compute_Jn_recursive(sys, n):
    """J_1 = J, J_n = h E(J_{n-1} u²)∘φ⁻¹"""
    _check_order(n)
    u_squared = sys.u ** 2
    Jn = compute_J(sys)
    for _ in range(n - 1):
        Jn = pushforward_density(sys.space, sys.map, Jn * u_squared)
    return Jn


def compute_Jn_direct(sys, n):
    """J_n = h_n E_n(u_n²)∘φ⁻ⁿ, the J of the system (space, φⁿ, u_n)"""
    _check_order(n)
    return compute_J(sys.power(n))


def compute_Jn_table(sys, max_n):
    """
    J_1..J_max_n by the recursion

    Returns:
        list of arrays, entry n-1 holds J_n
    """
    _check_order(max_n)
    u_squared = sys.u ** 2
    table = [compute_J(sys)]
    for _ in range(max_n - 1):
        table.append(pushforward_density(sys.space, sys.map, table[-1] * u_squared))
    return table


def apply_W_power(sys, f, n):
    """Wⁿf by n-fold application"""
    result = _vector(sys, f)
    for _ in range(n):
        result = apply_W(sys, result)
    return result

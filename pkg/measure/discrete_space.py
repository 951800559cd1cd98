"""
Discrete Measure Spaces
Atomic sigma-finite measure spaces on the index window {0..N-1}, measurable
self-maps with their preimage (fiber) structure, and the two fiber kernels
every weighted composition formula is built from:

- pushforward_density: (1/m_k) Σ_{j∈φ⁻¹(k)} w_j m_j
- conditional_expectation: mass-weighted average over φ⁻¹(φ(k))

Indices are 0-based here; documents and reports use 1-based indices.
"""

from dataclasses import dataclass, field
import logging

import numpy as np

from utils.errors import InputError, WindowInvariantError

logger = logging.getLogger(__name__)

# Default support threshold, relative to max|f|
DEFAULT_SUPPORT_TOL = 1e-12


def _frozen(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DiscreteMeasureSpace:
    """
    Measure space with point masses m_k > 0

    Attributes:
        masses: read-only vector of point masses
    """

    masses: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=float)
        if masses.ndim != 1 or masses.size < 1:
            raise InputError("masses must be a non-empty vector", location="masses")
        if not np.all(np.isfinite(masses)):
            raise InputError("masses must be finite", location="masses")
        bad = np.flatnonzero(masses <= 0)
        if bad.size:
            raise InputError(f"mass must be positive, got {masses[bad[0]]!r}",
                             location=f"masses[{bad[0] + 1}]")
        object.__setattr__(self, "masses", _frozen(masses))

    @classmethod
    def uniform(cls, n_points, mass=1.0):
        return cls(np.full(n_points, float(mass)))

    @property
    def n_points(self):
        return self.masses.size

    @property
    def total_mass(self):
        return float(self.masses.sum())

    def inner(self, a, b):
        """Weighted inner product Σ a_k conj(b_k) m_k"""
        return np.sum(np.asarray(a) * np.conj(np.asarray(b)) * self.masses)

    def norm(self, a):
        return float(np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2 * self.masses)))


@dataclass(frozen=True, eq=False)
class Transformation:
    """
    Total self-map of the index window with cached preimage lists

    Attributes:
        phi: read-only vector, phi[k] is the image of point k
        preimages: tuple of arrays, preimages[k] lists φ⁻¹(k) in increasing order
    """

    phi: np.ndarray
    preimages: tuple = field(init=False, repr=False)

    def __post_init__(self):
        phi = np.asarray(self.phi)
        if phi.ndim != 1 or phi.size < 1:
            raise InputError("phi must be a non-empty vector", location="phi")
        if not np.issubdtype(phi.dtype, np.integer):
            if not np.all(np.isfinite(phi)) or not np.all(phi == np.round(phi)):
                raise InputError("phi must contain integer indices", location="phi")
            phi = phi.astype(np.int64)
        n_points = phi.size
        escaping = np.flatnonzero((phi < 0) | (phi >= n_points))
        if escaping.size:
            k = int(escaping[0])
            raise WindowInvariantError(
                f"phi maps point {k + 1} to {int(phi[k]) + 1}, outside the window 1..{n_points}",
                index=k + 1)
        phi = _frozen(phi, dtype=np.int64)
        object.__setattr__(self, "phi", phi)

        # Group points by image: a stable sort keeps each fiber increasing
        order = np.argsort(phi, kind="stable")
        counts = np.bincount(phi, minlength=n_points)
        fibers = np.split(order, np.cumsum(counts)[:-1])
        object.__setattr__(self, "preimages", tuple(_frozen(f, dtype=np.int64) for f in fibers))

    @classmethod
    def identity(cls, n_points):
        return cls(np.arange(n_points))

    @property
    def n_points(self):
        return self.phi.size

    @property
    def is_injective(self):
        return bool(np.all(np.bincount(self.phi, minlength=self.n_points) <= 1))

    def image_mask(self):
        """Boolean mask of φ({0..N-1})"""
        mask = np.zeros(self.n_points, dtype=bool)
        mask[self.phi] = True
        return mask

    def preimage_mask(self, mask):
        """Boolean mask of φ⁻¹(A) for a boolean mask of A"""
        return np.asarray(mask, dtype=bool)[self.phi]

    def fiber_of(self, k):
        """The fiber φ⁻¹(φ(k)) containing k"""
        return self.preimages[int(self.phi[k])]

    def power(self, n):
        """φⁿ, with φ⁰ the identity"""
        if n < 0:
            raise InputError(f"power must be non-negative, got {n}", location="n")
        index = np.arange(self.n_points)
        for _ in range(n):
            index = self.phi[index]
        return Transformation(index)


def as_real_function(values, space, role="function"):
    """
    Validate pointwise data against a space

    Args:
        values: array-like of reals
        space: DiscreteMeasureSpace the data lives on
        role: name used in error messages (weight, density, test function, ...)

    Returns:
        float ndarray of length space.n_points
    """
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or array.size != space.n_points:
        raise InputError(f"{role} has length {array.size}, expected {space.n_points}",
                         location=role)
    if not np.all(np.isfinite(array)):
        raise InputError(f"{role} must be finite", location=role)
    return array


def _check_map(space, t):
    if t.n_points != space.n_points:
        raise InputError(f"transformation acts on {t.n_points} points, space has {space.n_points}",
                         location="phi")


def pushforward_density(space, t, w):
    """
    Density of the pushforward of w dμ under φ

    result(k) = (1/m_k) Σ_{j∈φ⁻¹(k)} w_j m_j. With w ≡ 1 this is h, with w = u²
    it is J.

    Args:
        space: DiscreteMeasureSpace
        t: Transformation
        w: pointwise weight

    Returns:
        float ndarray
    """
    _check_map(space, t)
    w = as_real_function(w, space, role="weight")
    fiber_sums = np.bincount(t.phi, weights=w * space.masses, minlength=space.n_points)
    return fiber_sums / space.masses


def radon_nikodym_h(space, t):
    """h = dμ∘φ⁻¹/dμ"""
    return pushforward_density(space, t, np.ones(space.n_points))


def radon_nikodym_hn(space, t, n):
    """h_n = dμ∘φ⁻ⁿ/dμ (h_0 ≡ 1)"""
    return radon_nikodym_h(space, t.power(n))


def conditional_expectation(space, t, f):
    """
    Conditional expectation onto φ⁻¹(Σ)-measurable functions

    E(f)(k) is the mass-weighted average of f over the fiber φ⁻¹(φ(k)). The
    denominator never vanishes because k lies in its own fiber.
    """
    _check_map(space, t)
    f = as_real_function(f, space, role="test function")
    numerators = np.bincount(t.phi, weights=f * space.masses, minlength=space.n_points)
    denominators = np.bincount(t.phi, weights=space.masses, minlength=space.n_points)
    return numerators[t.phi] / denominators[t.phi]


@dataclass(frozen=True)
class Support:
    """Sorted point indices where |f| exceeds a tolerance"""

    indices: tuple
    tolerance: float

    def __contains__(self, k):
        return k in self.indices

    def __len__(self):
        return len(self.indices)

    def mask(self, n_points):
        mask = np.zeros(n_points, dtype=bool)
        mask[list(self.indices)] = True
        return mask

    def issubset(self, other):
        return set(self.indices) <= set(other.indices)

    def missing_from(self, other):
        """Indices of self not in other, sorted"""
        return tuple(sorted(set(self.indices) - set(other.indices)))

    def one_based(self):
        return [k + 1 for k in self.indices]


def support_of(f, tol=None):
    """
    Support S(f) = {k : |f_k| > tol}

    Args:
        f: pointwise values
        tol: absolute threshold; None means DEFAULT_SUPPORT_TOL × max|f|

    Returns:
        Support
    """
    values = np.abs(np.asarray(f, dtype=float))
    if tol is None:
        tol = DEFAULT_SUPPORT_TOL * (float(values.max()) if values.size else 0.0)
    if tol < 0:
        raise InputError(f"support tolerance must be non-negative, got {tol}", location="tol")
    indices = tuple(int(k) for k in np.flatnonzero(values > tol))
    return Support(indices=indices, tolerance=float(tol))


def relative_support(f, relative_tol):
    """Support with the threshold taken relative to max|f|"""
    values = np.abs(np.asarray(f, dtype=float))
    scale = float(values.max()) if values.size else 0.0
    return support_of(values, relative_tol * scale)

"""Mass-weighted configuration geometry and cluster decompositions.

The center-of-mass-free configuration space ``X`` of ``N`` particles on a
line is represented in a fixed Jacobi basis that is orthonormal for the
mass-weighted inner product.  All vectors handed to callers are coordinate
vectors in that basis, so Euclidean operations on coordinates agree with
the mass-weighted ones on particle configurations.

For each cluster decomposition ``a`` the internal space (motion inside
clusters) and the intercluster space (relative motion of cluster centers)
are complementary orthogonal subspaces of ``X``; their projections are
plain symmetric matrices in the Jacobi coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidInput, UnsupportedConfiguration

__all__ = [
    "MassGeometry",
    "ClusterDecomposition",
    "SubspaceBasis",
    "build_mass_geometry",
    "enumerate_clusters",
    "is_refinement",
    "project",
    "subspace_basis",
    "pair_coordinate_factor",
]


@dataclass(frozen=True)
class ClusterDecomposition:
    """A partition of ``{1, ..., N}`` into disjoint nonempty clusters."""

    clusters: tuple[frozenset[int], ...]

    def __post_init__(self):
        flat = [j for c in self.clusters for j in c]
        if not self.clusters or any(len(c) == 0 for c in self.clusters):
            raise InvalidInput("clusters must be nonempty")
        if len(flat) != len(set(flat)):
            raise InvalidInput("clusters must be disjoint")
        canonical = tuple(sorted((frozenset(c) for c in self.clusters), key=min))
        object.__setattr__(self, "clusters", canonical)

    @property
    def particles(self) -> frozenset[int]:
        return frozenset().union(*self.clusters)

    @property
    def count(self) -> int:
        """Number of clusters, #(a)."""
        return len(self.clusters)

    @property
    def is_pair(self) -> bool:
        """True for an (N-1)-cluster decomposition with one genuine pair."""
        sizes = sorted(len(c) for c in self.clusters)
        return sizes == [1] * (len(self.particles) - 2) + [2]

    @property
    def pair(self) -> tuple[int, int]:
        if not self.is_pair:
            raise InvalidInput(f"{self} is not a pair decomposition")
        (two,) = [c for c in self.clusters if len(c) == 2]
        j, k = sorted(two)
        return j, k

    def internal_pairs(self) -> list[tuple[int, int]]:
        """All pairs (j, k) contained in one cluster of this decomposition."""
        out = []
        for c in self.clusters:
            out.extend(itertools.combinations(sorted(c), 2))
        return sorted(out)

    def __str__(self):
        return "|".join("".join(str(j) for j in sorted(c)) for c in self.clusters)

    def __repr__(self):
        return f"ClusterDecomposition({self})"


def cluster_from_sets(*groups) -> ClusterDecomposition:
    return ClusterDecomposition(tuple(frozenset(g) for g in groups))


def is_refinement(b: ClusterDecomposition, a: ClusterDecomposition) -> bool:
    """True iff each cluster of ``b`` lies inside a cluster of ``a``.

    Every decomposition refines itself.
    """
    if b.particles != a.particles:
        raise InvalidInput("cluster decompositions over different particle sets")
    return all(any(cb <= ca for ca in a.clusters) for cb in b.clusters)


def _mass_gram_schmidt(vectors: np.ndarray, masses: np.ndarray, tol=1e-12):
    """Orthonormalize rows of ``vectors`` for the mass inner product."""
    basis = []
    for v in vectors:
        w = v.astype(float).copy()
        for u in basis:
            w -= np.sum(masses * w * u) * u
        nrm = np.sqrt(np.sum(masses * w * w))
        if nrm > tol:
            basis.append(w / nrm)
    return np.array(basis) if basis else np.zeros((0, len(masses)))


@dataclass(frozen=True)
class MassGeometry:
    """Masses plus the Jacobi frame of the internal space X.

    ``jacobi_basis`` has shape ``(dim_X, N)``; row ``i`` holds the particle
    components of the i-th basis vector of X.  ``cm_basis`` is the
    (mass-normalized) center-of-mass direction.
    """

    masses: tuple[float, ...]
    d: int
    jacobi_basis: np.ndarray = field(repr=False)
    cm_basis: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.masses)

    @property
    def dim_X(self) -> int:
        return self.d * (self.N - 1)

    @property
    def mass_array(self) -> np.ndarray:
        return np.asarray(self.masses, dtype=float)

    def mass_inner(self, r1: np.ndarray, r2: np.ndarray) -> float:
        return float(np.sum(self.mass_array * np.asarray(r1) * np.asarray(r2)))

    def to_coords(self, r: np.ndarray) -> np.ndarray:
        """Jacobi coordinates of the X-component of a particle configuration."""
        m = self.mass_array
        return self.jacobi_basis @ (m * np.asarray(r, dtype=float))

    def from_coords(self, y: np.ndarray) -> np.ndarray:
        """Particle configuration in X with the given Jacobi coordinates."""
        return np.asarray(y, dtype=float) @ self.jacobi_basis


def build_mass_geometry(masses, d: int = 1) -> MassGeometry:
    """Construct the mass-weighted geometry for N in {2, 3}, d = 1."""
    masses = tuple(float(m) for m in masses)
    if not masses:
        raise InvalidInput("masses must be nonempty")
    if any(m <= 0 for m in masses):
        raise InvalidInput("all masses must be strictly positive")
    if d != 1:
        raise UnsupportedConfiguration(f"only d=1 is implemented, got d={d}")
    if len(masses) not in (2, 3):
        raise UnsupportedConfiguration(
            f"only N in {{2, 3}} is implemented, got N={len(masses)}"
        )
    m = np.asarray(masses)
    n = len(masses)
    # Spanning set of X: successive relative vectors r_j - r_{j+1}; the
    # mass Gram-Schmidt of this list is the sequential Jacobi frame, so the
    # first basis vector is the normalized (1, -1, 0, ...) pair direction.
    rel = np.zeros((n - 1, n))
    for j in range(n - 1):
        rel[j, j] = 1.0
        rel[j, j + 1] = -1.0
    jacobi = _mass_gram_schmidt(rel, m)
    if jacobi.shape[0] != n - 1:
        raise InvalidInput("degenerate mass configuration")
    cm = _mass_gram_schmidt(np.ones((1, n)), m)
    return MassGeometry(masses=masses, d=d, jacobi_basis=jacobi, cm_basis=cm)


@lru_cache(maxsize=None)
def _enumerate_partitions(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All set partitions of {1..n} (Bell(n) of them)."""
    if n == 1:
        return (((1,),),)
    out = []
    for smaller in _enumerate_partitions(n - 1):
        for i in range(len(smaller)):
            out.append(smaller[:i] + (smaller[i] + (n,),) + smaller[i + 1 :])
        out.append(smaller + ((n,),))
    return tuple(out)


def enumerate_clusters(geometry: MassGeometry) -> list[ClusterDecomposition]:
    """All cluster decompositions, ordered from a_min (finest) to a_max."""
    parts = [
        ClusterDecomposition(tuple(frozenset(c) for c in p))
        for p in _enumerate_partitions(geometry.N)
    ]
    parts.sort(key=lambda a: (-a.count, str(a)))
    return parts


def a_min_of(geometry: MassGeometry) -> ClusterDecomposition:
    return cluster_from_sets(*[{j} for j in range(1, geometry.N + 1)])


def a_max_of(geometry: MassGeometry) -> ClusterDecomposition:
    return cluster_from_sets(set(range(1, geometry.N + 1)))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal bases (Jacobi coordinates) of the internal/intercluster
    split X = X^a (+) X_a for one cluster decomposition."""

    cluster: ClusterDecomposition
    internal_basis: np.ndarray = field(repr=False)  # (k, dim_X)
    intercluster_basis: np.ndarray = field(repr=False)  # (dim_X - k, dim_X)

    @property
    def internal_dim(self) -> int:
        return self.internal_basis.shape[0]

    @property
    def projector_internal(self) -> np.ndarray:
        b = self.internal_basis
        return b.T @ b if b.size else np.zeros((self.intercluster_basis.shape[1],) * 2)

    @property
    def projector_intercluster(self) -> np.ndarray:
        b = self.intercluster_basis
        return b.T @ b if b.size else np.zeros((self.internal_basis.shape[1],) * 2)


def subspace_basis(geometry: MassGeometry, a: ClusterDecomposition) -> SubspaceBasis:
    """Internal and intercluster orthonormal bases for decomposition ``a``."""
    if a.particles != frozenset(range(1, geometry.N + 1)):
        raise InvalidInput("decomposition does not match the geometry's particles")
    m = geometry.mass_array
    n = geometry.N
    # Internal space: spanned by within-cluster relative vectors.
    spanning = []
    for c in a.clusters:
        members = sorted(c)
        for j, k in zip(members, members[1:]):
            v = np.zeros(n)
            v[j - 1] = 1.0
            v[k - 1] = -1.0
            spanning.append(v)
    internal_particle = (
        _mass_gram_schmidt(np.array(spanning), m)
        if spanning
        else np.zeros((0, n))
    )
    internal = np.array([geometry.to_coords(v) for v in internal_particle]).reshape(
        -1, geometry.dim_X
    )
    # Intercluster space: complement of X^a inside X.
    comp = []
    proj = internal.T @ internal if internal.size else np.zeros((geometry.dim_X,) * 2)
    for i in range(geometry.dim_X):
        e = np.zeros(geometry.dim_X)
        e[i] = 1.0
        w = e - proj @ e
        for u in comp:
            w -= np.dot(w, u) * u
        nrm = np.linalg.norm(w)
        if nrm > 1e-10:
            comp.append(w / nrm)
    intercluster = np.array(comp).reshape(-1, geometry.dim_X)
    return SubspaceBasis(
        cluster=a, internal_basis=internal, intercluster_basis=intercluster
    )


def project(
    geometry: MassGeometry,
    x: np.ndarray,
    a: ClusterDecomposition,
    which: str,
) -> np.ndarray:
    """Project Jacobi coordinates onto X^a (``internal``) or X_a
    (``intercluster``)."""
    basis = subspace_basis(geometry, a)
    if which == "internal":
        return basis.projector_internal @ np.asarray(x, dtype=float)
    if which == "intercluster":
        return basis.projector_intercluster @ np.asarray(x, dtype=float)
    raise InvalidInput(f"which must be 'internal' or 'intercluster', got {which!r}")


def pair_coordinate_factor(geometry: MassGeometry, pair: tuple[int, int]) -> float:
    """Scalar gamma with r_j - r_k = gamma * y on X^{(j,k)}.

    ``y`` is the Jacobi coordinate along the (oriented) basis vector of the
    pair's internal line; gamma = 1/sqrt(mu_jk) for the reduced mass mu.
    Potentials are evaluated as V(t, gamma * y) so that the identification
    with the relative coordinate is exact.
    """
    j, k = pair
    if not (1 <= j < k <= geometry.N):
        raise InvalidInput(f"invalid pair {pair}")
    mj, mk = geometry.masses[j - 1], geometry.masses[k - 1]
    mu = mj * mk / (mj + mk)
    return 1.0 / np.sqrt(mu)


def pair_direction(geometry: MassGeometry, pair: tuple[int, int]) -> np.ndarray:
    """Unit Jacobi-coordinate vector spanning X^{(j,k)}, oriented so that
    the coordinate y satisfies r_j - r_k = pair_coordinate_factor * y."""
    j, k = pair
    n = geometry.N
    v = np.zeros(n)
    v[j - 1] = 1.0
    v[k - 1] = -1.0
    e = _mass_gram_schmidt(v[None, :], geometry.mass_array)[0]
    coords = geometry.to_coords(e)
    # orient: along e, r_j - r_k = e_j - e_k > 0 by construction of GS
    if e[j - 1] - e[k - 1] < 0:
        coords = -coords
    return coords

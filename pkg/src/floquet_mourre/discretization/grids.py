"""Product grids for L2(T) (x) L2(X).

States are complex arrays of shape ``(..., M, n, [n])``: leading axes are
batch, the time axis holds M samples over one period, and each spatial
axis holds ``n_points`` samples of a periodic box [-L, L).  The torus
quadrature weight is T/M and the box weight is (2L/n)^dim_X; norms and
inner products in :mod:`states` carry these weights so that Parseval holds
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from ..errors import InvalidInput

__all__ = ["ProductGrid", "SpaceGrid", "build_grid"]


@dataclass(frozen=True)
class SpaceGrid:
    """Periodic box [-L, L)^dim_X with spectral momenta."""

    L: float
    n_points: int
    dim_X: int

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n_points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_points,) * self.dim_X

    @property
    def dim(self) -> int:
        return self.n_points**self.dim_X

    @cached_property
    def x1(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.n_points)

    @cached_property
    def k1(self) -> np.ndarray:
        return 2.0 * np.pi * scipy.fft.fftfreq(self.n_points, d=self.h)

    def x_mesh(self) -> list[np.ndarray]:
        """Position meshes, one array of shape ``shape`` per axis."""
        grids = np.meshgrid(*([self.x1] * self.dim_X), indexing="ij")
        return list(grids)

    def k_mesh(self) -> list[np.ndarray]:
        grids = np.meshgrid(*([self.k1] * self.dim_X), indexing="ij")
        return list(grids)

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(sum(x**2 for x in self.x_mesh()))

    def axes(self, total_ndim: int) -> tuple[int, ...]:
        return tuple(range(total_ndim - self.dim_X, total_ndim))

    def fft(self, psi: np.ndarray) -> np.ndarray:
        return scipy.fft.fftn(psi, axes=self.axes(psi.ndim))

    def ifft(self, psi: np.ndarray) -> np.ndarray:
        return scipy.fft.ifftn(psi, axes=self.axes(psi.ndim))


@dataclass(frozen=True)
class ProductGrid:
    """Torus modes times a periodic spatial box."""

    T: float
    M: int
    L: float
    n_points: int
    dim_X: int

    @property
    def omega(self) -> float:
        return 2.0 * np.pi / self.T

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.M,) + (self.n_points,) * self.dim_X

    @property
    def dim(self) -> int:
        return self.M * self.n_points**self.dim_X

    @property
    def state_ndim(self) -> int:
        return 1 + self.dim_X

    @cached_property
    def space(self) -> SpaceGrid:
        return SpaceGrid(L=self.L, n_points=self.n_points, dim_X=self.dim_X)

    @cached_property
    def mode_numbers(self) -> np.ndarray:
        """Temporal Fourier mode indices n in unshifted FFT order."""
        return np.rint(scipy.fft.fftfreq(self.M, d=1.0 / self.M)).astype(int)

    @cached_property
    def mode_values(self) -> np.ndarray:
        """Eigenvalues n*omega of D_t = -i d/dt, FFT order."""
        return self.mode_numbers * self.omega

    @cached_property
    def t_samples(self) -> np.ndarray:
        return (self.T / self.M) * np.arange(self.M)

    @property
    def weight(self) -> float:
        """Quadrature weight of one grid cell."""
        return (self.T / self.M) * self.space.h**self.dim_X

    def t_axis(self, total_ndim: int) -> int:
        return total_ndim - self.state_ndim

    def fft_t(self, psi: np.ndarray) -> np.ndarray:
        return scipy.fft.fft(psi, axis=self.t_axis(psi.ndim))

    def ifft_t(self, psi: np.ndarray) -> np.ndarray:
        return scipy.fft.ifft(psi, axis=self.t_axis(psi.ndim))

    def broadcast_mode(self, values: np.ndarray) -> np.ndarray:
        """Reshape per-mode values (length M) for broadcasting over states."""
        return np.asarray(values).reshape((self.M,) + (1,) * self.dim_X)

    def fingerprint(self) -> str:
        return (
            f"T={self.T:.12g},M={self.M},L={self.L:.12g},"
            f"n={self.n_points},dimX={self.dim_X}"
        )


def build_grid(T: float, M: int, L: float, n_points: int, dim_X: int) -> ProductGrid:
    """Validated grid constructor.

    M must be even and at least 4; n_points a power of two at least 8;
    L positive.  dim_X is 1 for two-body internal space, 2 for three-body.
    """
    if not (isinstance(M, (int, np.integer)) and M >= 4 and M % 2 == 0):
        raise InvalidInput(f"M must be an even integer >= 4, got {M}")
    if not (
        isinstance(n_points, (int, np.integer))
        and n_points >= 8
        and (n_points & (n_points - 1)) == 0
    ):
        raise InvalidInput(f"n_points must be a power of two >= 8, got {n_points}")
    if not (T > 0 and L > 0):
        raise InvalidInput("T and L must be positive")
    if dim_X not in (0, 1, 2):
        raise InvalidInput(f"dim_X must be 0, 1 or 2, got {dim_X}")
    return ProductGrid(T=float(T), M=int(M), L=float(L), n_points=int(n_points), dim_X=int(dim_X))

"""Composable matrix-free operators on the product grid.

A :class:`LinearOperator` wraps an ``apply`` and an ``adjoint_apply``
closure plus a description tree.  Primitive constructors cover the
diagonal families used throughout:

* ``mode_multiplier``      -- functions of D_t (diagonal in temporal modes),
* ``momentum_multiplier``  -- functions of p (diagonal in spatial momentum),
* ``position_multiplier``  -- functions of (t, x) (pointwise multiplication),

and resolvents of those multipliers are again multipliers with a pole
guard.  Sums, scalar multiples, products, adjoints and Re T = (T + T*)/2
compose matrix-free; ``to_dense`` materializes small operators against the
canonical basis for oracle-grade checks.

Applies are batch-transparent: any leading axes are preserved, transforms
act on the trailing grid axes only, and everything is re-entrant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import InvalidInput, SingularResolvent, TooLarge
from .grids import ProductGrid

__all__ = [
    "LinearOperator",
    "identity",
    "mode_multiplier",
    "momentum_multiplier",
    "position_multiplier",
    "mode_resolvent",
    "to_dense",
    "spectral_bounds",
    "assemble",
]

DENSE_MAX_DIM = 4096


@dataclass(frozen=True)
class LinearOperator:
    """Matrix-free operator bound to a grid."""

    grid: ProductGrid
    apply: Callable[[np.ndarray], np.ndarray]
    adjoint_apply: Callable[[np.ndarray], np.ndarray]
    is_self_adjoint: bool
    description: str
    _bounds: tuple[float, float] | None = field(default=None, repr=False)

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return self.apply(psi)

    @property
    def H(self) -> "LinearOperator":
        return LinearOperator(
            grid=self.grid,
            apply=self.adjoint_apply,
            adjoint_apply=self.apply,
            is_self_adjoint=self.is_self_adjoint,
            description=f"adj({self.description})",
            _bounds=self._bounds if self.is_self_adjoint else None,
        )

    def re(self) -> "LinearOperator":
        """Re T = (T + T*)/2."""
        if self.is_self_adjoint:
            return self

        def apply(psi, s=self):
            return 0.5 * (s.apply(psi) + s.adjoint_apply(psi))

        return LinearOperator(
            grid=self.grid,
            apply=apply,
            adjoint_apply=apply,
            is_self_adjoint=True,
            description=f"re({self.description})",
        )

    def __add__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        _same_grid(self, other)
        lo = hi = None
        if self._bounds and other._bounds and self.is_self_adjoint and other.is_self_adjoint:
            lo = self._bounds[0] + other._bounds[0]
            hi = self._bounds[1] + other._bounds[1]
        return LinearOperator(
            grid=self.grid,
            apply=lambda psi, a=self, b=other: a.apply(psi) + b.apply(psi),
            adjoint_apply=lambda psi, a=self, b=other: a.adjoint_apply(psi)
            + b.adjoint_apply(psi),
            is_self_adjoint=self.is_self_adjoint and other.is_self_adjoint,
            description=f"({self.description} + {other.description})",
            _bounds=(lo, hi) if lo is not None else None,
        )

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        c = complex(scalar)
        real = abs(c.imag) == 0.0
        bounds = None
        if self._bounds is not None and real:
            lo, hi = np.real(c) * np.array(self._bounds)
            bounds = (min(lo, hi), max(lo, hi))
        return LinearOperator(
            grid=self.grid,
            apply=lambda psi, a=self: c * a.apply(psi),
            adjoint_apply=lambda psi, a=self: np.conj(c) * a.adjoint_apply(psi),
            is_self_adjoint=self.is_self_adjoint and real,
            description=f"({scalar!r} * {self.description})",
            _bounds=bounds,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def __matmul__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        _same_grid(self, other)
        return LinearOperator(
            grid=self.grid,
            apply=lambda psi, a=self, b=other: a.apply(b.apply(psi)),
            adjoint_apply=lambda psi, a=self, b=other: b.adjoint_apply(
                a.adjoint_apply(psi)
            ),
            is_self_adjoint=False,
            description=f"({self.description} @ {other.description})",
        )

    def sandwich(self, j: "LinearOperator") -> "LinearOperator":
        """j* self j, self-adjoint whenever self is."""
        _same_grid(self, j)
        return LinearOperator(
            grid=self.grid,
            apply=lambda psi, a=self, b=j: b.adjoint_apply(a.apply(b.apply(psi))),
            adjoint_apply=lambda psi, a=self, b=j: b.adjoint_apply(
                a.adjoint_apply(b.apply(psi))
            ),
            is_self_adjoint=self.is_self_adjoint,
            description=f"sandwich({j.description}, {self.description})",
        )


def _same_grid(a: LinearOperator, b: LinearOperator):
    if a.grid is not b.grid and a.grid != b.grid:
        raise InvalidInput("operators live on different grids")


def identity(grid: ProductGrid) -> LinearOperator:
    return LinearOperator(
        grid=grid,
        apply=lambda psi: np.array(psi, copy=True),
        adjoint_apply=lambda psi: np.array(psi, copy=True),
        is_self_adjoint=True,
        description="Id",
        _bounds=(1.0, 1.0),
    )


def mode_multiplier(grid: ProductGrid, values: np.ndarray, description: str) -> LinearOperator:
    """Function of D_t: per-mode values (length M, FFT order)."""
    vals = np.asarray(values)
    if vals.shape != (grid.M,):
        raise InvalidInput(f"mode multiplier needs {grid.M} values, got {vals.shape}")
    vb = grid.broadcast_mode(vals)
    vbc = grid.broadcast_mode(np.conj(vals))
    sa = bool(np.all(np.isreal(vals)))

    def apply(psi, v=vb):
        return grid.ifft_t(v * grid.fft_t(psi))

    def adj(psi, v=vbc):
        return grid.ifft_t(v * grid.fft_t(psi))

    bounds = (float(vals.real.min()), float(vals.real.max())) if sa else None
    return LinearOperator(grid, apply, adj, sa, description, bounds)


def momentum_multiplier(grid: ProductGrid, values: np.ndarray, description: str) -> LinearOperator:
    """Function of p: values on the spatial momentum mesh (shape grid.space.shape)."""
    vals = np.asarray(values)
    if vals.shape != grid.space.shape:
        raise InvalidInput(
            f"momentum multiplier needs shape {grid.space.shape}, got {vals.shape}"
        )
    sa = bool(np.all(np.isreal(vals)))
    conj = np.conj(vals)

    def apply(psi, v=vals):
        return grid.space.ifft(v * grid.space.fft(psi))

    def adj(psi, v=conj):
        return grid.space.ifft(v * grid.space.fft(psi))

    bounds = (float(vals.real.min()), float(vals.real.max())) if sa else None
    return LinearOperator(grid, apply, adj, sa, description, bounds)


def position_multiplier(grid: ProductGrid, values: np.ndarray, description: str) -> LinearOperator:
    """Multiplication by a function of (t, x): shape grid.shape, or
    grid.space.shape for time-independent functions."""
    vals = np.asarray(values)
    if vals.shape not in (grid.shape, grid.space.shape):
        raise InvalidInput(
            f"position multiplier needs shape {grid.shape} or {grid.space.shape}, "
            f"got {vals.shape}"
        )
    sa = bool(np.all(np.isreal(vals)))
    conj = np.conj(vals)
    bounds = (float(vals.real.min()), float(vals.real.max())) if sa else None
    return LinearOperator(
        grid,
        lambda psi, v=vals: v * psi,
        lambda psi, v=conj: v * psi,
        sa,
        description,
        bounds,
    )


def mode_resolvent(
    grid: ProductGrid,
    c: complex,
    *,
    min_pole_distance: float | None = None,
    override: bool = False,
    description: str | None = None,
) -> LinearOperator:
    """(c - D_t)^{-1} as a mode multiplier with a pole guard.

    The guard demands dist(c, omega Z) >= omega/8 (the constructions in use
    take c = 3 omega/2 or lambda0 - delta off the ladder); pass
    ``override=True`` to bypass it after checking your own distance.
    """
    guard = grid.omega / 8.0 if min_pole_distance is None else min_pole_distance
    dist = np.min(np.abs(c - grid.mode_values))
    ladder_dist = abs(
        complex(c) - grid.omega * np.round(np.real(c) / grid.omega)
    )
    if dist == 0.0:
        raise SingularResolvent(f"c={c} is a D_t eigenvalue on this grid")
    if not override and ladder_dist < guard:
        raise SingularResolvent(
            f"dist({c}, omega Z) = {ladder_dist:.3g} < guard {guard:.3g}; "
            "pass override=True to accept"
        )
    vals = 1.0 / (c - grid.mode_values)
    return mode_multiplier(
        grid, vals, description or f"(({c!r}) - D_t)^-1"
    )


def to_dense(op: LinearOperator, max_dim: int = DENSE_MAX_DIM) -> np.ndarray:
    """Materialize as a dense matrix by applying to the canonical basis.

    Verifies the adjoint/self-adjoint flags on the matrix and raises
    ``TooLarge`` above ``max_dim``.
    """
    dim = op.grid.dim
    if dim > max_dim:
        raise TooLarge(f"state dimension {dim} exceeds max_dim {max_dim}")
    basis = np.eye(dim, dtype=complex).reshape((dim,) + op.grid.shape)
    cols = op.apply(basis).reshape(dim, dim).T
    if op.is_self_adjoint:
        herm = np.linalg.norm(cols - cols.conj().T) / max(np.linalg.norm(cols), 1e-300)
        if herm > 1e-10:
            raise InvalidInput(
                f"operator flagged self-adjoint but dense symmetry residual {herm:.2e}"
            )
    else:
        adj_cols = op.adjoint_apply(basis).reshape(dim, dim).T
        resid = np.linalg.norm(adj_cols - cols.conj().T) / max(
            np.linalg.norm(cols), 1e-300
        )
        if resid > 1e-10:
            raise InvalidInput(
                f"adjoint_apply inconsistent with apply: residual {resid:.2e}"
            )
    return cols


def dense_operator(grid: ProductGrid, matrix: np.ndarray, description: str, *, is_self_adjoint=False) -> LinearOperator:
    """Wrap an explicit matrix (acting on flattened states) as an operator."""
    m = np.asarray(matrix)
    mh = m.conj().T

    def apply(psi, mat=m):
        lead = psi.shape[: psi.ndim - grid.state_ndim]
        flat = psi.reshape(lead + (-1,))
        return (flat @ mat.T).reshape(psi.shape)

    def adj(psi, mat=mh):
        lead = psi.shape[: psi.ndim - grid.state_ndim]
        flat = psi.reshape(lead + (-1,))
        return (flat @ mat.T).reshape(psi.shape)

    return LinearOperator(grid, apply, adj, is_self_adjoint, description)


def spectral_bounds(op: LinearOperator) -> tuple[float, float] | None:
    """Rigorous enclosure of the numerical range, when the composition
    tree supports one (multipliers and sums of multipliers)."""
    return op._bounds


# --- canonical named operators -------------------------------------------

def dt_operator(grid: ProductGrid) -> LinearOperator:
    return mode_multiplier(grid, grid.mode_values, "D_t")


def kinetic(grid: ProductGrid) -> LinearOperator:
    """p^2/2 on the full internal space."""
    k2 = sum(k**2 for k in grid.space.k_mesh())
    return momentum_multiplier(grid, 0.5 * k2, "p^2/2")


def momentum_axis(grid: ProductGrid, axis: int) -> LinearOperator:
    return momentum_multiplier(grid, grid.space.k_mesh()[axis], f"p[{axis}]")


def position_axis(grid: ProductGrid, axis: int) -> LinearOperator:
    return position_multiplier(grid, grid.space.x_mesh()[axis], f"x[{axis}]")


def assemble(expr, grid: ProductGrid, geometry=None) -> LinearOperator:
    """Build an operator from a small declarative composition tree.

    ``expr`` is a nested tuple; supported heads:

    ``("id",)``, ``("dt",)``, ``("kinetic",)``, ``("p", axis)``,
    ``("x", axis)``, ``("mode_resolvent", c)``, ``("mode_fn", fn)``,
    ``("momentum_fn", fn)``  (fn of the tuple of k meshes),
    ``("position_fn", fn)``  (fn of the tuple of x meshes),
    ``("scale", c, expr)``, ``("sum", *exprs)``, ``("prod", *exprs)``,
    ``("re", expr)``, ``("adj", expr)``, ``("dilation",)`` for
    Re(p . x) on the full internal space.
    """
    head = expr[0]
    rec = lambda e: assemble(e, grid, geometry)
    if head == "id":
        return identity(grid)
    if head == "dt":
        return dt_operator(grid)
    if head == "kinetic":
        return kinetic(grid)
    if head == "p":
        return momentum_axis(grid, expr[1])
    if head == "x":
        return position_axis(grid, expr[1])
    if head == "mode_resolvent":
        return mode_resolvent(grid, expr[1])
    if head == "mode_fn":
        return mode_multiplier(grid, expr[1](grid.mode_values), f"f(D_t:{expr[1]})")
    if head == "momentum_fn":
        return momentum_multiplier(
            grid, expr[1](*grid.space.k_mesh()), f"f(p:{expr[1]})"
        )
    if head == "position_fn":
        return position_multiplier(
            grid, expr[1](*grid.space.x_mesh()), f"f(x:{expr[1]})"
        )
    if head == "scale":
        return expr[1] * rec(expr[2])
    if head == "sum":
        out = rec(expr[1])
        for e in expr[2:]:
            out = out + rec(e)
        return out
    if head == "prod":
        out = rec(expr[1])
        for e in expr[2:]:
            out = out @ rec(e)
        return out
    if head == "re":
        return rec(expr[1]).re()
    if head == "adj":
        return rec(expr[1]).H
    if head == "dilation":
        terms = None
        for ax in range(grid.dim_X):
            t = momentum_axis(grid, ax) @ position_axis(grid, ax)
            terms = t if terms is None else terms + t
        return terms.re()
    raise InvalidInput(f"unknown operator expression head {head!r}")

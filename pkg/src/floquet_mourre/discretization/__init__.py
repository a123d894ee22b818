"""Grids, states, matrix-free operators, and spectral filters."""

from .grids import ProductGrid, SpaceGrid, build_grid
from .operators import (
    DENSE_MAX_DIM,
    LinearOperator,
    assemble,
    dense_operator,
    dt_operator,
    identity,
    kinetic,
    mode_multiplier,
    mode_resolvent,
    momentum_axis,
    momentum_multiplier,
    position_axis,
    position_multiplier,
    spectral_bounds,
    to_dense,
)
from .filters import (
    SpectralFilter,
    apply_filter,
    bump,
    chebyshev_filter,
    dense_eigensolve,
    smooth_step,
    smooth_step_derivative,
)
from .states import (
    boundary_mass,
    certify_inbox,
    inner,
    norm,
    normalize,
    orthonormalize,
    random_inbox_states,
)

__all__ = [
    "ProductGrid",
    "SpaceGrid",
    "build_grid",
    "DENSE_MAX_DIM",
    "LinearOperator",
    "assemble",
    "dense_operator",
    "dt_operator",
    "identity",
    "kinetic",
    "mode_multiplier",
    "mode_resolvent",
    "momentum_axis",
    "momentum_multiplier",
    "position_axis",
    "position_multiplier",
    "spectral_bounds",
    "to_dense",
    "SpectralFilter",
    "apply_filter",
    "bump",
    "chebyshev_filter",
    "dense_eigensolve",
    "smooth_step",
    "smooth_step_derivative",
    "boundary_mass",
    "certify_inbox",
    "inner",
    "norm",
    "normalize",
    "orthonormalize",
    "random_inbox_states",
]

"""Smooth spectral filters: the canonical bump and its operator calculus.

The filter profile is the fixed bump

    f_delta(u) = exp(1 - 1/(1 - (u/delta)^2))   for |u| < delta,  else 0,

which is C-infinity, equals 1 at 0 and vanishes identically outside
[-delta, delta].  ``apply_filter`` realizes f_delta(K - lambda0) either by
a dense eigendecomposition (ground truth below ``DENSE_MAX_DIM``) or by a
verified Chebyshev expansion on a spectral enclosure of K.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from numpy.polynomial import chebyshev as npcheb

from ..errors import InvalidInput, SpectralBoundError, TooLarge
from .grids import ProductGrid
from .operators import (
    DENSE_MAX_DIM,
    LinearOperator,
    dense_operator,
    spectral_bounds,
    to_dense,
)

__all__ = [
    "bump",
    "smooth_step",
    "SpectralFilter",
    "apply_filter",
    "dense_eigensolve",
    "chebyshev_filter",
]


def bump(u, delta: float):
    """Canonical even bump supported in [-delta, delta] with bump(0) = 1."""
    u = np.asarray(u, dtype=float)
    s = (u / delta) ** 2
    out = np.zeros_like(u)
    inside = s < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
    return out


def _bump_primitive_ramp(u):
    """exp(-1/u) for u > 0 else 0 (the classic smooth-step ingredient)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    with np.errstate(divide="ignore", over="ignore"):
        out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(u):
    """C-infinity monotone step: 0 for u <= 0, 1 for u >= 1, exact at ends."""
    a = _bump_primitive_ramp(u)
    b = _bump_primitive_ramp(1.0 - np.asarray(u, dtype=float))
    with np.errstate(invalid="ignore"):
        out = np.where(a + b > 0, a / np.where(a + b == 0, 1.0, a + b), 0.0)
    return out


def smooth_step_derivative(u):
    """Derivative of ``smooth_step`` in closed form."""
    u = np.asarray(u, dtype=float)
    a = _bump_primitive_ramp(u)
    b = _bump_primitive_ramp(1.0 - u)
    out = np.zeros_like(u)
    mid = (u > 0) & (u < 1)
    um, am, bm = u[mid], a[mid], b[mid]
    da = am / um**2
    db = -bm / (1.0 - um) ** 2
    out[mid] = (da * bm - am * db) / (am + bm) ** 2
    return out


@dataclass(frozen=True)
class SpectralFilter:
    """f_delta(. - center): the canonical bump at ``center`` with half
    width ``half_width``; ``method`` picks dense or Chebyshev realization."""

    center: float
    half_width: float
    method: str = "auto"  # auto | dense | chebyshev

    def __post_init__(self):
        if self.half_width <= 0:
            raise InvalidInput("filter half_width must be positive")
        if self.method not in ("auto", "dense", "chebyshev"):
            raise InvalidInput(f"unknown filter method {self.method!r}")

    def profile(self, lam):
        return bump(np.asarray(lam) - self.center, self.half_width)


def dense_eigensolve(K: LinearOperator, max_dim: int = DENSE_MAX_DIM):
    """Full eigendecomposition of a self-adjoint operator (dense path)."""
    if not K.is_self_adjoint:
        raise InvalidInput("dense_eigensolve requires a self-adjoint operator")
    mat = to_dense(K, max_dim=max_dim)
    evals, evecs = scipy.linalg.eigh(mat)
    return evals, evecs


def _lanczos_enclosure(K: LinearOperator) -> tuple[float, float]:
    dim = K.grid.dim
    shape = K.grid.shape

    def mv(v):
        return K.apply(v.reshape(shape)).reshape(-1)

    lo_op = scipy.sparse.linalg.LinearOperator((dim, dim), matvec=mv, dtype=complex)
    try:
        hi = scipy.sparse.linalg.eigsh(
            lo_op, k=1, which="LA", return_eigenvectors=False, tol=1e-4
        )[0]
        lo = scipy.sparse.linalg.eigsh(
            lo_op, k=1, which="SA", return_eigenvectors=False, tol=1e-4
        )[0]
    except Exception as exc:  # pragma: no cover - scipy failure path
        raise SpectralBoundError(f"Lanczos enclosure failed: {exc}") from exc
    span = hi - lo
    pad = 0.05 * span + 1e-8
    return float(lo - pad), float(hi + pad)


@lru_cache(maxsize=64)
def _cheb_coeffs(center: float, half_width: float, lo: float, hi: float, tol: float):
    """Chebyshev coefficients of the shifted bump on [lo, hi], verified to
    uniform error <= tol on a dense sample."""

    def f(t):
        lam = 0.5 * (hi - lo) * (t + 1.0) + lo
        return bump(lam - center, half_width)

    sample_t = np.cos(np.linspace(0.0, np.pi, 4001))
    target = f(sample_t)
    degree = 64
    while degree <= 1 << 16:
        coeffs = npcheb.chebinterpolate(f, degree)
        err = np.max(np.abs(npcheb.chebval(sample_t, coeffs) - target))
        if err <= tol:
            return tuple(coeffs), float(err)
        degree *= 2
    raise SpectralBoundError(
        f"Chebyshev degree cap reached; last uniform error {err:.2e} > {tol:g}. "
        "The enclosure is likely far too wide for the filter width."
    )


def chebyshev_filter(
    K: LinearOperator,
    filt: SpectralFilter,
    *,
    enclosure: tuple[float, float] | None = None,
    tol: float = 1e-8,
) -> LinearOperator:
    """f(K) as a Chebyshev polynomial with certified uniform error."""
    if enclosure is None:
        enclosure = spectral_bounds(K) or _lanczos_enclosure(K)
    lo, hi = enclosure
    if not hi > lo:
        raise SpectralBoundError(f"degenerate enclosure [{lo}, {hi}]")
    coeffs, err = _cheb_coeffs(filt.center, filt.half_width, lo, hi, tol)
    alpha = 2.0 / (hi - lo)
    beta = -(hi + lo) / (hi - lo)

    def apply(psi, c=np.asarray(coeffs)):
        # Clenshaw-free forward recurrence: T_{k+1} = 2 X T_k - T_{k-1}
        x_psi = lambda v: alpha * K.apply(v) + beta * v
        t_prev = psi
        out = c[0] * psi
        if len(c) > 1:
            t_cur = x_psi(psi)
            out = out + c[1] * t_cur
            for ck in c[2:]:
                t_next = 2.0 * x_psi(t_cur) - t_prev
                t_prev, t_cur = t_cur, t_next
                if ck != 0.0:
                    out = out + ck * t_next
        return out

    op = LinearOperator(
        grid=K.grid,
        apply=apply,
        adjoint_apply=apply,
        is_self_adjoint=True,
        description=(
            f"cheb[f_{filt.half_width:g}(K-{filt.center:g}), "
            f"deg={len(coeffs) - 1}, err={err:.1e}]"
        ),
    )
    return op


def apply_filter(
    K: LinearOperator,
    filt: SpectralFilter,
    *,
    max_dim: int = DENSE_MAX_DIM,
    enclosure: tuple[float, float] | None = None,
    tol: float = 1e-8,
) -> LinearOperator:
    """Realize f_delta(K - lambda0) for self-adjoint K."""
    if not K.is_self_adjoint:
        raise InvalidInput("apply_filter requires a self-adjoint operator")
    method = filt.method
    if method == "auto":
        method = "dense" if K.grid.dim <= max_dim else "chebyshev"
    if method == "dense":
        if K.grid.dim > max_dim:
            raise TooLarge(
                f"dense filter requested at dimension {K.grid.dim} > {max_dim}"
            )
        evals, evecs = dense_eigensolve(K, max_dim=max_dim)
        fvals = filt.profile(evals)
        mat = (evecs * fvals) @ evecs.conj().T
        return dense_operator(
            K.grid,
            mat,
            f"dense[f_{filt.half_width:g}(K-{filt.center:g})]",
            is_self_adjoint=True,
        )
    return chebyshev_filter(K, filt, enclosure=enclosure, tol=tol)

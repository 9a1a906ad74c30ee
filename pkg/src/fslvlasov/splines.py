"""Cubic B-spline fitting and evaluation on uniform grids.

The basis function is the centered cubic B-spline in grid units,

    6 S(u) = (2 - |u|)^3          for 1 <= |u| <= 2,
    6 S(u) = 4 - 6 u^2 + 3 |u|^3  for |u| <= 1,

with support |u| < 2 and partition of unity: sum_k S(u - k) = 1 for all u.
A fitted spline interpolates its samples at every grid node.  Periodic
grids lead to a cyclic tridiagonal system with stencil (1/6, 2/3, 1/6);
natural grids append two end-derivative conditions, which fold into two
ghost coefficients per side stored inline with the node coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .grids import UniformGrid1D

#: stencil offsets covered by a point with fractional position t in cell i0
STENCIL_OFFSETS = np.array([-1, 0, 1, 2])


def basis_eval(u):
    """Evaluate the cubic B-spline S(u) in grid units (vectorized)."""
    u = np.abs(np.asarray(u, dtype=float))
    out = np.zeros_like(u)
    inner = u <= 1.0
    outer = (u > 1.0) & (u < 2.0)
    ui = u[inner]
    out[inner] = (4.0 - 6.0 * ui**2 + 3.0 * ui**3) / 6.0
    uo = u[outer]
    out[outer] = (2.0 - uo) ** 3 / 6.0
    return out if out.ndim else float(out)


def stencil_weights(t):
    """Basis values S(t+1), S(t), S(t-1), S(t-2) for fractional t in [0, 1].

    These weight the four coefficients at offsets (-1, 0, 1, 2) from the
    cell index.  Returned shape is t.shape + (4,).
    """
    t = np.asarray(t, dtype=float)
    s = 1.0 - t
    w = np.empty(t.shape + (4,))
    w[..., 0] = s**3 / 6.0
    w[..., 1] = (4.0 - 6.0 * t**2 + 3.0 * t**3) / 6.0
    w[..., 2] = (4.0 - 6.0 * s**2 + 3.0 * s**3) / 6.0
    w[..., 3] = t**3 / 6.0
    return w


@dataclass(frozen=True)
class SplineCoeffs:
    """Cubic spline coefficients over one or two uniform grids.

    Per dimension the coefficient count is n_nodes for periodic grids and
    n_nodes + 2 for natural grids (one ghost on each side: index 0 holds
    the coefficient centered one cell left of the domain).
    """

    grids: tuple[UniformGrid1D, ...]
    coeffs: np.ndarray

    @property
    def ndim(self) -> int:
        return len(self.grids)

    def node_coeffs(self) -> np.ndarray:
        """Coefficients attached to grid nodes (ghosts stripped)."""
        c = self.coeffs
        for axis, g in enumerate(self.grids):
            if not g.periodic:
                c = c.take(np.arange(1, g.n_nodes + 1), axis=axis)
        return c


def _coef_len(grid: UniformGrid1D) -> int:
    return grid.n_nodes if grid.periodic else grid.n_nodes + 2


# ---------------------------------------------------------------------------
# linear solves


def solve_cyclic_banded(rhs, s_off=1.0 / 6.0, s_diag=2.0 / 3.0):
    """Solve the cyclic tridiagonal system with constant stencil.

    The matrix has `s_diag` on the diagonal and `s_off` on the two
    off-diagonals including the periodic corners.  Solved O(N) by a
    Sherman-Morrison rank-1 correction of two plain banded sweeps.
    ``rhs`` may be (N,) or (N, nrhs); the solve runs on axis 0.
    """
    rhs = np.asarray(rhs, dtype=float)
    squeeze = rhs.ndim == 1
    if squeeze:
        rhs = rhs[:, None]
    n = rhs.shape[0]
    gamma = -s_diag
    ab = np.zeros((3, n))
    ab[0, 1:] = s_off
    ab[2, :-1] = s_off
    ab[1, :] = s_diag
    ab[1, 0] = s_diag - gamma
    ab[1, -1] = s_diag - s_off * s_off / gamma
    u = np.zeros((n, 1))
    u[0, 0] = gamma
    u[-1, 0] = s_off
    sol = solve_banded((1, 1), ab, np.concatenate([rhs, u], axis=1))
    y, z = sol[:, :-1], sol[:, -1]
    denom = 1.0 + z[0] + (s_off / gamma) * z[-1]
    fact = (y[0, :] + (s_off / gamma) * y[-1, :]) / denom
    out = y - z[:, None] * fact[None, :]
    return out[:, 0] if squeeze else out


def _solve_natural(samples, grid: UniformGrid1D):
    """Natural fit along axis 0: returns coefficients with ghosts, (n+2, ...)."""
    f = np.asarray(samples, dtype=float)
    squeeze = f.ndim == 1
    if squeeze:
        f = f[:, None]
    n = grid.n_nodes  # = n_cells + 1
    d = grid.delta
    ab = np.zeros((3, n))
    ab[0, 1:] = 1.0 / 6.0
    ab[2, :-1] = 1.0 / 6.0
    ab[1, :] = 2.0 / 3.0
    # end rows after eliminating the ghosts through the derivative conditions
    ab[0, 1] = 1.0 / 3.0
    ab[2, -2] = 1.0 / 3.0
    rhs = f.copy()
    rhs[0] += d * grid.deriv_lo / 3.0
    rhs[-1] -= d * grid.deriv_hi / 3.0
    core = solve_banded((1, 1), ab, rhs)
    out = np.empty((n + 2,) + f.shape[1:])
    out[1:-1] = core
    out[0] = core[1] - 2.0 * d * grid.deriv_lo
    out[-1] = core[-2] + 2.0 * d * grid.deriv_hi
    return out[:, 0] if squeeze else out


def _fit_axis0(samples, grid: UniformGrid1D):
    if grid.periodic:
        return solve_cyclic_banded(samples)
    return _solve_natural(samples, grid)


# ---------------------------------------------------------------------------
# fitting


def fit_1d(samples, grid: UniformGrid1D) -> SplineCoeffs:
    """Fit spline coefficients so the spline interpolates `samples` at nodes."""
    f = np.asarray(samples, dtype=float)
    if f.shape != (grid.n_nodes,):
        raise ValueError(f"expected {grid.n_nodes} samples, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite samples")
    return SplineCoeffs((grid,), _fit_axis0(f, grid))


def fit_2d(samples, gx: UniformGrid1D, gy: UniformGrid1D) -> SplineCoeffs:
    """Tensor-product fit: 1D systems along x for each row, then along y."""
    f = np.asarray(samples, dtype=float)
    if f.shape != (gx.n_nodes, gy.n_nodes):
        raise ValueError(
            f"expected shape {(gx.n_nodes, gy.n_nodes)}, got {f.shape}"
        )
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite samples")
    cx = _fit_axis0(f, gx)           # (nx_coef, ny_nodes)
    c = _fit_axis0(cx.T, gy).T       # (nx_coef, ny_coef)
    return SplineCoeffs((gx, gy), c)


# ---------------------------------------------------------------------------
# evaluation


def _locate(grid: UniformGrid1D, x, clamp: bool = False):
    """Cell index and fractional offset for physical positions.

    Periodic grids wrap; natural grids raise on points outside the domain
    unless ``clamp`` is set (BSL feet use clamping with loss accounting).
    """
    u = grid.to_units(x)
    if grid.periodic:
        i0 = np.floor(u).astype(np.int64)
        return i0, u - i0
    n = grid.n_cells
    tol = 1e-9
    if clamp:
        u = np.clip(u, 0.0, float(n))
    elif np.any(u < -tol) or np.any(u > n + tol):
        raise ValueError("evaluation point outside natural-BC domain")
    else:
        u = np.clip(u, 0.0, float(n))
    i0 = np.minimum(np.floor(u), n - 1).astype(np.int64)
    return i0, u - i0


def _gather_indices(grid: UniformGrid1D, i0):
    """Coefficient-array indices of the 4-point stencil at cell i0."""
    idx = i0[..., None] + STENCIL_OFFSETS
    if grid.periodic:
        return np.mod(idx, grid.n_cells)
    return idx + 1  # ghost at position 0 shifts node k to slot k+1


def eval_1d(c: SplineCoeffs, x, clamp: bool = False):
    """Evaluate a 1D spline at x (scalar or array)."""
    (grid,) = c.grids
    xs = np.asarray(x, dtype=float)
    i0, t = _locate(grid, xs.ravel(), clamp=clamp)
    idx = _gather_indices(grid, i0)
    w = stencil_weights(t)
    vals = np.sum(c.coeffs[idx] * w, axis=-1)
    return float(vals[0]) if xs.ndim == 0 else vals.reshape(xs.shape)


def eval_2d(c: SplineCoeffs, x, y, clamp: bool = False):
    """Evaluate a 2D tensor-product spline at paired points (x, y)."""
    gx, gy = c.grids
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("x and y must have matching shapes")
    ix, tx = _locate(gx, xs.ravel(), clamp=clamp)
    iy, ty = _locate(gy, ys.ravel(), clamp=clamp)
    idxx = _gather_indices(gx, ix)
    idxy = _gather_indices(gy, iy)
    wx = stencil_weights(tx)
    wy = stencil_weights(ty)
    block = c.coeffs[idxx[:, :, None], idxy[:, None, :]]
    vals = np.einsum("nij,ni,nj->n", block, wx, wy)
    return float(vals[0]) if xs.ndim == 0 else vals.reshape(xs.shape)

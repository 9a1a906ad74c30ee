"""2D Poisson solver for the guiding-center model.

-laplace(phi) = rho on a box periodic in x and Dirichlet (phi = 0) in y.
The potential is obtained mode by mode from an FFT in x and a
fourth-order compact (Numerov) tridiagonal solve in y.  The field
E = -grad(phi) is then recovered by quadrature-based compact systems:
a Simpson relation in the periodic x direction, and in y the same
interior relation closed by corrected-midpoint rows at the two walls,
whose curvature terms restore third-order accuracy there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .grids import UniformGrid1D
from .splines import SplineCoeffs, fit_2d, solve_cyclic_banded


@dataclass(frozen=True)
class FieldState2D:
    gx: UniformGrid1D
    gy: UniformGrid1D
    phi: np.ndarray
    Ex: np.ndarray
    Ey: np.ndarray
    Ex_spline: SplineCoeffs
    Ey_spline: SplineCoeffs


def _check_shape(arr, gx, gy, name):
    arr = np.asarray(arr, dtype=float)
    if arr.shape != (gx.n_nodes, gy.n_nodes):
        raise ValueError(
            f"{name}: expected shape {(gx.n_nodes, gy.n_nodes)}, got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite {name}")
    return arr


def _xi(gx: UniformGrid1D):
    """Discrete x wavenumbers 2*pi*m/Lx in FFT ordering."""
    return 2.0 * np.pi * np.fft.fftfreq(gx.n_nodes, d=gx.delta)


def _thomas_modes(off, diag, rhs):
    """Solve many tridiagonal systems with constant per-system stencil.

    off/diag have shape (M,), rhs has shape (M, K); system m is
    tridiag(off[m], diag[m], off[m]) of size K.  Complex supported.
    """
    m, k = rhs.shape
    cp = np.empty((m, k), dtype=rhs.dtype)
    dp = np.empty((m, k), dtype=rhs.dtype)
    cp[:, 0] = off / diag
    dp[:, 0] = rhs[:, 0] / diag
    for j in range(1, k):
        denom = diag - off * cp[:, j - 1]
        cp[:, j] = off / denom
        dp[:, j] = (rhs[:, j] - off * dp[:, j - 1]) / denom
    out = np.empty_like(dp)
    out[:, -1] = dp[:, -1]
    for j in range(k - 2, -1, -1):
        out[:, j] = dp[:, j] - cp[:, j] * out[:, j + 1]
    return out


def solve_potential(rho, gx: UniformGrid1D, gy: UniformGrid1D):
    """Potential of -laplace(phi) = rho, periodic in x, phi = 0 at the y walls.

    Per x mode xi the Numerov relation

      phihat_{j+1} (1 - xi^2 dy^2/12) + phihat_j (-2 - 10 xi^2 dy^2/12)
        + phihat_{j-1} (1 - xi^2 dy^2/12)
        = -(dy^2/12) (rhohat_{j+1} + 10 rhohat_j + rhohat_{j-1})

    is solved for the interior nodes; the xi = 0 mode uses the same
    stencil.  Fourth-order accurate in dy.
    """
    rho = _check_shape(rho, gx, gy, "rho")
    if gy.periodic or gy.n_cells < 5:
        raise ValueError("y grid must be natural with >= 4 interior nodes")
    dy = gy.delta
    rho_hat = np.fft.fft(rho, axis=0)
    rhs = -(dy**2 / 12.0) * (rho_hat[:, 2:] + 10.0 * rho_hat[:, 1:-1] + rho_hat[:, :-2])
    xi2 = _xi(gx) ** 2
    off = 1.0 - xi2 * dy**2 / 12.0
    diag = -2.0 - 10.0 * xi2 * dy**2 / 12.0
    phi_hat = np.zeros_like(rho_hat)
    phi_hat[:, 1:-1] = _thomas_modes(off.astype(complex), diag.astype(complex), rhs)
    return np.real(np.fft.ifft(phi_hat, axis=0))


def compute_Ex(phi, gx: UniformGrid1D, gy: UniformGrid1D):
    """x field from the per-row Simpson relation (periodic compact system)

      2 dx [ (1/6) Ex_{i-1} + (2/3) Ex_i + (1/6) Ex_{i+1} ] = phi_{i-1} - phi_{i+1}
    """
    phi = _check_shape(phi, gx, gy, "phi")
    rhs = (np.roll(phi, 1, axis=0) - np.roll(phi, -1, axis=0)) / (2.0 * gx.delta)
    return solve_cyclic_banded(rhs)


def compute_Ey(phi, rho, gx: UniformGrid1D, gy: UniformGrid1D):
    """y field: interior Simpson rows plus corrected-midpoint wall rows.

    The wall rows integrate E over the first (last) cell by the midpoint
    rule corrected with the density jump and an x-curvature term,

      (dy/2)(E_0 + E_1) = phi_0 - phi_1 + (dy^2/12)(rho_1 - rho_0)
                          + (dy^2/12) dxx(phi_1 - phi_0),

    with the x second derivative evaluated spectrally.  Third order or
    better at the walls, fourth order inside.
    """
    phi = _check_shape(phi, gx, gy, "phi")
    rho = _check_shape(rho, gx, gy, "rho")
    ny = gy.n_nodes
    dy = gy.delta
    ab = np.zeros((3, ny))
    ab[0, 1:] = 1.0 / 6.0
    ab[2, :-1] = 1.0 / 6.0
    ab[1, :] = 2.0 / 3.0
    ab[0, 1] = 0.5
    ab[1, 0] = 0.5
    ab[2, -2] = 0.5
    ab[1, -1] = 0.5

    xi2 = _xi(gx) ** 2

    def dxx(g):
        return np.real(np.fft.ifft(-xi2 * np.fft.fft(g)))

    rhs = np.zeros((ny, gx.n_nodes))
    rhs[1:-1, :] = ((phi[:, :-2] - phi[:, 2:]) / (2.0 * dy)).T
    rhs[0, :] = (
        (phi[:, 0] - phi[:, 1]) / dy
        + (dy / 12.0) * (rho[:, 1] - rho[:, 0])
        + (dy / 12.0) * dxx(phi[:, 1] - phi[:, 0])
    )
    rhs[-1, :] = (
        (phi[:, -2] - phi[:, -1]) / dy
        + (dy / 12.0) * (rho[:, -1] - rho[:, -2])
        + (dy / 12.0) * dxx(phi[:, -1] - phi[:, -2])
    )
    return solve_banded((1, 1), ab, rhs).T


def solve_fields(rho, gx: UniformGrid1D, gy: UniformGrid1D) -> FieldState2D:
    """Full pipeline: potential, both field components, and their splines."""
    rho = _check_shape(rho, gx, gy, "rho")
    phi = solve_potential(rho, gx, gy)
    ex = compute_Ex(phi, gx, gy)
    ey = compute_Ey(phi, rho, gx, gy)
    return FieldState2D(gx, gy, phi, ex, ey, fit_2d(ex, gx, gy), fit_2d(ey, gx, gy))


def solve_fields_spectral_y(rho, gx: UniformGrid1D, gy: UniformGrid1D) -> FieldState2D:
    """Sensitivity alternative: fully spectral solve, periodic in both x and y.

    Treats the y direction as periodic with period Ly (the node at y_max
    duplicates y_min and is rebuilt from the wrap).  Provided as a
    config switch for sensitivity checks only; the production solver is
    the Dirichlet one above.
    """
    rho = _check_shape(rho, gx, gy, "rho")
    nx, ny = gx.n_nodes, gy.n_cells
    r = rho[:, :ny]
    r_hat = np.fft.fft2(r - r.mean())
    kx = 2.0 * np.pi * np.fft.fftfreq(nx, d=gx.delta)
    ky = 2.0 * np.pi * np.fft.fftfreq(ny, d=gy.delta)
    k2 = kx[:, None] ** 2 + ky[None, :] ** 2
    k2[0, 0] = 1.0
    phi_hat = r_hat / k2
    phi_hat[0, 0] = 0.0
    ex_hat = -1j * kx[:, None] * phi_hat
    ey_hat = -1j * ky[None, :] * phi_hat
    phi = np.real(np.fft.ifft2(phi_hat))
    ex = np.real(np.fft.ifft2(ex_hat))
    ey = np.real(np.fft.ifft2(ey_hat))

    def close(a):
        return np.concatenate([a, a[:, :1]], axis=1)

    phi, ex, ey = close(phi), close(ex), close(ey)
    return FieldState2D(gx, gy, phi, ex, ey, fit_2d(ex, gx, gy), fit_2d(ey, gx, gy))

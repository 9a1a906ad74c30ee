"""Forward integrators for the characteristic system dX/dt = U(X, t).

The advection velocity is supplied by a field provider, which deposits
the frozen particle weights at the (possibly stage-advanced) positions,
solves the Poisson problem, and interpolates the resulting field back to
the particles with cubic splines.  Every stage therefore costs one field
solve; the t^n solve is performed once per step and shared by stage 1.
Providers count their solves so tests can audit the stage structure.
"""

from __future__ import annotations

import numpy as np

from .deposition import ParticleSet, deposit_charge, deposit_density_2d
from .field1d import solve_poisson_1d
from .field2d import solve_fields
from .grids import UniformGrid1D
from .splines import eval_1d, eval_2d


class SelfConsistentField1D:
    """E(x) at particle positions from charge deposition + periodic Poisson."""

    def __init__(self, grid_x: UniformGrid1D, dv: float):
        self.grid = grid_x
        self.dv = dv
        self.solves = 0
        self.last_state = None

    def field_at(self, pos, weights, t):
        rho = deposit_charge(
            ParticleSet(pos, pos, weights, (pos.size, 1)), self.grid, self.dv
        )
        state = solve_poisson_1d(rho, self.grid)
        self.solves += 1
        self.last_state = state
        return eval_1d(state.E_spline, pos)

    def wrap(self, pos):
        return self.grid.wrap(pos)


class ExternalLinearForce:
    """External force -a(t) x; no field solve (the Hill harness)."""

    def __init__(self, a):
        self.a = a
        self.solves = 0

    def field_at(self, pos, weights, t):
        return -self.a(t) * pos

    def wrap(self, pos):
        return pos  # natural domain: positions are not wrapped


class SelfConsistentField2D:
    """Rotated field E_perp = (Ey, -Ex) at the particles (guiding center).

    The y walls are streamlines (Ex = 0 there), so the field seen by the
    ghost particles just outside is the constant-normal extension: splines
    are evaluated at the wall-clipped y.
    """

    def __init__(self, gx: UniformGrid1D, gy: UniformGrid1D):
        self.gx = gx
        self.gy = gy
        self.solves = 0
        self.last_state = None

    def velocity_at(self, px, py, weights, t):
        rho = deposit_density_2d(
            ParticleSet(px, py, weights, (px.size, 1)), self.gx, self.gy
        )
        state = solve_fields(rho, self.gx, self.gy)
        self.solves += 1
        self.last_state = state
        py_in = np.clip(py, self.gy.xmin, self.gy.xmax)
        ey = eval_2d(state.Ey_spline, px, py_in)
        ex = eval_2d(state.Ex_spline, px, py_in)
        return ey, -ex

    def wrap_x(self, px):
        return self.gx.wrap(px)


def _check_finite(pos1, pos2):
    if not (np.all(np.isfinite(pos1)) and np.all(np.isfinite(pos2))):
        raise FloatingPointError("non-finite particle positions after push")


# ---------------------------------------------------------------------------
# Vlasov-Poisson pushers: state X = (x, v), dx/dt = v, dv/dt = E(x, t)


def push_verlet_vp(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    """Velocity half-kick, drift, field resolve at t+dt, half-kick."""
    e0 = fld.field_at(p.pos1, p.weights, t)
    vh = p.pos2 + 0.5 * dt * e0
    x1 = fld.wrap(p.pos1 + dt * vh)
    e1 = fld.field_at(x1, p.weights, t + dt)
    v1 = vh + 0.5 * dt * e1
    _check_finite(x1, v1)
    return p.replace_positions(x1, v1)


def push_rk2_vp(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    """Explicit midpoint rule with the stage field at t + dt/2."""
    k1v = p.pos2
    k1a = fld.field_at(p.pos1, p.weights, t)
    xm = fld.wrap(p.pos1 + 0.5 * dt * k1v)
    k2v = p.pos2 + 0.5 * dt * k1a
    k2a = fld.field_at(xm, p.weights, t + 0.5 * dt)
    x1 = fld.wrap(p.pos1 + dt * k2v)
    v1 = p.pos2 + dt * k2a
    _check_finite(x1, v1)
    return p.replace_positions(x1, v1)


def push_rk4_vp(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    """Classical RK4; the three intermediate fields are solved at the
    stage-advanced positions with the frozen weights."""
    x, v = p.pos1, p.pos2
    k1v = v
    k1a = fld.field_at(x, p.weights, t)
    xa = fld.wrap(x + 0.5 * dt * k1v)
    k2v = v + 0.5 * dt * k1a
    k2a = fld.field_at(xa, p.weights, t + 0.5 * dt)
    xb = fld.wrap(x + 0.5 * dt * k2v)
    k3v = v + 0.5 * dt * k2a
    k3a = fld.field_at(xb, p.weights, t + 0.5 * dt)
    xc = fld.wrap(x + dt * k3v)
    k4v = v + dt * k3a
    k4a = fld.field_at(xc, p.weights, t + dt)
    x1 = fld.wrap(x + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v))
    v1 = v + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    _check_finite(x1, v1)
    return p.replace_positions(x1, v1)


VP_PUSHERS = {
    "verlet": push_verlet_vp,
    "rk2": push_rk2_vp,
    "rk4": push_rk4_vp,
}


# ---------------------------------------------------------------------------
# guiding-center pushers: dX/dt = E_perp(X, t), X = (x, y)


def _gc_move(fld, p, px, py, dx, dy):
    return fld.wrap_x(px + dx), py + dy


def push_euler_gc(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    u, v = fld.velocity_at(p.pos1, p.pos2, p.weights, t)
    x1, y1 = _gc_move(fld, p, p.pos1, p.pos2, dt * u, dt * v)
    _check_finite(x1, y1)
    return p.replace_positions(x1, y1)


def push_rk2_gc(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    """Heun predictor-corrector: full predictor step, field resolve there,
    then the trapezoidal average of the two stage velocities."""
    u0, v0 = fld.velocity_at(p.pos1, p.pos2, p.weights, t)
    xp, yp = _gc_move(fld, p, p.pos1, p.pos2, dt * u0, dt * v0)
    u1, v1 = fld.velocity_at(xp, yp, p.weights, t + dt)
    x1, y1 = _gc_move(fld, p, p.pos1, p.pos2, 0.5 * dt * (u0 + u1), 0.5 * dt * (v0 + v1))
    _check_finite(x1, y1)
    return p.replace_positions(x1, y1)


def push_rk3_gc(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    """Classical Kutta third-order tableau (0, 1/2, 1; b = 1/6, 2/3, 1/6)."""
    x, y = p.pos1, p.pos2
    u1, v1 = fld.velocity_at(x, y, p.weights, t)
    xa, ya = _gc_move(fld, p, x, y, 0.5 * dt * u1, 0.5 * dt * v1)
    u2, v2 = fld.velocity_at(xa, ya, p.weights, t + 0.5 * dt)
    xb, yb = _gc_move(fld, p, x, y, dt * (2.0 * u2 - u1), dt * (2.0 * v2 - v1))
    u3, v3 = fld.velocity_at(xb, yb, p.weights, t + dt)
    x1, y1 = _gc_move(
        fld, p, x, y,
        dt / 6.0 * (u1 + 4.0 * u2 + u3),
        dt / 6.0 * (v1 + 4.0 * v2 + v3),
    )
    _check_finite(x1, y1)
    return p.replace_positions(x1, y1)


def push_rk4_gc(p: ParticleSet, fld, dt: float, t: float) -> ParticleSet:
    x, y = p.pos1, p.pos2
    u1, v1 = fld.velocity_at(x, y, p.weights, t)
    xa, ya = _gc_move(fld, p, x, y, 0.5 * dt * u1, 0.5 * dt * v1)
    u2, v2 = fld.velocity_at(xa, ya, p.weights, t + 0.5 * dt)
    xb, yb = _gc_move(fld, p, x, y, 0.5 * dt * u2, 0.5 * dt * v2)
    u3, v3 = fld.velocity_at(xb, yb, p.weights, t + 0.5 * dt)
    xc, yc = _gc_move(fld, p, x, y, dt * u3, dt * v3)
    u4, v4 = fld.velocity_at(xc, yc, p.weights, t + dt)
    x1, y1 = _gc_move(
        fld, p, x, y,
        dt / 6.0 * (u1 + 2.0 * u2 + 2.0 * u3 + u4),
        dt / 6.0 * (v1 + 2.0 * v2 + 2.0 * v3 + v4),
    )
    _check_finite(x1, y1)
    return p.replace_positions(x1, y1)


GC_PUSHERS = {
    "euler": push_euler_gc,
    "rk2": push_rk2_gc,
    "rk3": push_rk3_gc,
    "rk4": push_rk4_gc,
}

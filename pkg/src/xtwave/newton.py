"""Discrete Newton potential: inverse of the spatial elliptic operator.

The operator maps a load to the spline field whose c^2-weighted stiffness
moments reproduce the load's mass moments.  It induces the dual (semi)norms
entering the stability and error norms.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .forms import assemble_space_matrix
from .quadrature import panel_points


@dataclass
class NewtonSolver:
    """Cached factorization of the c^2-stiffness on a zero-both spline space."""

    space: object
    c2: callable
    M_x: np.ndarray
    K_x: np.ndarray
    K_cho: tuple
    n_quad: int

    def solve_K(self, rhs):
        return sla.cho_solve(self.K_cho, rhs)


def make_newton_solver(space_x, c2, n_quad=None):
    n = n_quad or space_x.degree + 2
    M_x = assemble_space_matrix(space_x, space_x, 0, 0, n_points=n).matrix
    K_x = assemble_space_matrix(space_x, space_x, 1, 1, c2, n_points=n).matrix
    return NewtonSolver(space_x, c2, M_x, K_x, sla.cho_factor(K_x), n)


def moment_vector(solver, load, n_points=None):
    """Mass moments of a load function against the space basis."""
    n = n_points or solver.n_quad
    xq, wq = panel_points(solver.space.breakpoints, n)
    B = solver.space.tabulate(xq, 0)
    vals = np.asarray(load(xq), dtype=float)
    return B.T @ (wq * vals)


def apply(solver, load):
    """Newton potential coefficients: K_x z = (load, basis)."""
    if callable(load):
        m = moment_vector(solver, load)
    else:
        m = solver.M_x @ np.asarray(load, dtype=float)
    return solver.solve_K(m)


def norm_Nh(solver, load):
    """Discrete dual seminorm of a load (norm on the spline space itself)."""
    if callable(load):
        m = moment_vector(solver, load)
    else:
        m = solver.M_x @ np.asarray(load, dtype=float)
    val = float(m @ solver.solve_K(m))
    return np.sqrt(max(val, 0.0))


def seminorm_Neh(solver, v, mesh_t, T, n_quad=None):
    """Exponentially weighted time integral of the squared dual seminorm.

    v is either a callable v(x, t) broadcasting over tensor grids, or a
    coefficient matrix (space dim x time dim) paired with a time space via
    the tuple (coeffs, space_t).
    """
    n = n_quad or solver.n_quad
    if isinstance(v, tuple):
        coeffs, space_t = v
        # quadratic form w^T (M_e kron M K^-1 M) w evaluated factor-wise
        from .forms import assemble_time_matrix

        M_e = assemble_time_matrix(space_t, space_t, 0, 0, T, n_points=n).matrix
        N = solver.M_x @ solver.solve_K(solver.M_x)
        val = float(np.sum((N @ coeffs @ M_e) * coeffs))
        return np.sqrt(max(val, 0.0))
    bp_t = mesh_t.breakpoints if hasattr(mesh_t, "breakpoints") else np.asarray(mesh_t)
    tq, wt = panel_points(bp_t, n)
    wt_e = wt * np.exp(-tq / T)
    xq, wx = panel_points(solver.space.breakpoints, n)
    B = solver.space.tabulate(xq, 0)
    vals = np.broadcast_to(
        np.asarray(v(xq[:, None], tq[None, :]), dtype=float), (xq.size, tq.size)
    )
    moments = B.T @ (vals * wx[:, None])  # (n_x, n_tq)
    z = solver.solve_K(moments)
    per_node = np.einsum("aq,aq->q", moments, z)
    return np.sqrt(max(float(wt_e @ per_node), 0.0))

"""Discrete norms, error reports, elliptic projectors and inf-sup estimation."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .forms import assemble_space_matrix, assemble_time_matrix
from .newton import make_newton_solver
from .quadrature import gauss_rule, panel_points
from .splines import test_space_of
from .system import evaluate_grid

# keys of the squared sums accumulated by error_report; "e" suffix marks the
# exponentially weighted variants
_SUM_KEYS = (
    ("U", True),
    ("U", False),
    ("V", True),
    ("V", False),
    ("dtU", True),
    ("cgradU", True),
)


@dataclass
class ErrorReport:
    """Components of the weighted stability norm plus plain L2 errors."""

    err_dtU_L2e: float
    err_dtV_Neh: float
    err_cgradU_L2e: float
    err_V_L2e: float
    err_Veh: float
    err_U_L2e: float
    err_U_L2: float
    err_V_L2: float
    relative: bool


@dataclass
class InfSupEstimate:
    """Numerically computed inf-sup constant and its theoretical lower bound."""

    gamma_h: float
    lower_bound: float
    dims: tuple


def eoc(errors):
    """Estimated orders of convergence between successive mesh halvings."""
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])


def infsup_lower_bound(problem):
    c = problem.poincare_constant / problem.c0
    return 1.0 / (2.0 * np.sqrt(c**2 + 4.0 * problem.T**2))


def _time_slice_values(solution, x, ts, d_x, d_t, which):
    """Discrete field values along a fixed-x line, shift included."""
    Bx = solution.space_x.tabulate([x], d_x)[0]
    coeffs = solution.u_coeffs if which == "u" else solution.v_coeffs
    vals = solution.space_t.tabulate(ts, d_t) @ (Bx @ coeffs)
    if d_t == 0:
        p = solution.problem
        if which == "u":
            vals = vals + (p.dU0(x) if d_x else p.U0(x))
        else:
            vals = vals + (p.dV0(x) if d_x else p.V0(x))
    return vals


def _kink_corrections(solution, problem, xq, wx, n, T):
    """Quadrature corrections for time elements cut by the discontinuity line.

    A Gauss rule is only legitimate where the integrand is smooth, so the
    contribution of each cut element is replaced by two panels meeting at the
    kink.  Returns per-key corrections for both the squared errors and the
    squared exact norms.
    """
    exact = problem.exact
    st = solution.space_t
    bp_t = st.breakpoints
    at, bt = float(bp_t[0]), float(bp_t[-1])
    rule = gauss_rule(n)
    c2 = problem.c2
    corr_err = {key: 0.0 for key in _SUM_KEYS}
    corr_norm = {key: 0.0 for key in _SUM_KEYS}

    for i, x in enumerate(xq):
        ts_kink = exact.kink_time(x)
        if ts_kink is None or not (at + 1e-13 < ts_kink < bt - 1e-13):
            continue
        k = int(np.searchsorted(bp_t, ts_kink, side="right") - 1)
        t0, t1 = float(bp_t[k]), float(bp_t[k + 1])
        if min(ts_kink - t0, t1 - ts_kink) < 1e-13:
            continue
        panels = ((t0, t1, -1.0), (t0, ts_kink, 1.0), (ts_kink, t1, 1.0))
        for a, b, sign in panels:
            tn = a + (b - a) * rule.nodes
            wn = (b - a) * rule.weights
            wne = wn * np.exp(-tn / T)
            ex = {
                "U": exact.u(x, tn),
                "V": exact.v(x, tn),
                "dtU": exact.v(x, tn),
                "cgradU": exact.dx_u(x, tn),
            }
            disc = {
                "U": _time_slice_values(solution, x, tn, 0, 0, "u"),
                "V": _time_slice_values(solution, x, tn, 0, 0, "v"),
                "dtU": _time_slice_values(solution, x, tn, 0, 1, "u"),
                "cgradU": _time_slice_values(solution, x, tn, 1, 0, "u"),
            }
            for mat, weighted in _SUM_KEYS:
                xw = wx[i] * (c2(x) if mat == "cgradU" else 1.0)
                w = wne if weighted else wn
                corr_err[(mat, weighted)] += sign * xw * float(w @ (ex[mat] - disc[mat]) ** 2)
                corr_norm[(mat, weighted)] += sign * xw * float(w @ ex[mat] ** 2)
    return corr_err, corr_norm


def error_report(solution, problem, n_quad=None, relative=True):
    """Weighted norm components of the error against the exact solution."""
    exact = problem.exact
    if exact is None:
        raise ValueError("problem has no exact solution")
    sx, st = solution.space_x, solution.space_t
    n = n_quad or max(sx.degree, st.degree) + 3
    T = problem.T
    xq, wx = panel_points(sx.breakpoints, n)
    tq, wt = panel_points(st.breakpoints, n)
    wt_e = wt * np.exp(-tq / T)
    c2x = problem.c2(xq)

    X, Tm = xq[:, None], tq[None, :]
    fields = {
        "U": (0, 0, "u", exact.u(X, Tm)),
        "V": (0, 0, "v", exact.v(X, Tm)),
        "dtU": (0, 1, "u", exact.v(X, Tm)),
        "cgradU": (1, 0, "u", exact.dx_u(X, Tm)),
    }
    if exact.dt_v is not None:
        fields["dtV"] = (0, 1, "v", exact.dt_v(X, Tm))

    E, XV = {}, {}
    for name, (d_x, d_t, which, ex_vals) in fields.items():
        u, v = evaluate_grid(solution, xq, tq, d_x, d_t)
        discrete = u if which == "u" else v
        ex_vals = np.broadcast_to(np.asarray(ex_vals, dtype=float), discrete.shape)
        E[name] = ex_vals - discrete
        XV[name] = ex_vals

    err_sq, norm_sq = {}, {}
    for mat, weighted in _SUM_KEYS:
        wxe = wx * c2x if mat == "cgradU" else wx
        wte = wt_e if weighted else wt
        err_sq[(mat, weighted)] = float(wxe @ (E[mat] ** 2) @ wte)
        norm_sq[(mat, weighted)] = float(wxe @ (XV[mat] ** 2) @ wte)

    if exact.kink_time is not None:
        corr_err, corr_norm = _kink_corrections(solution, problem, xq, wx, n, T)
        for key in err_sq:
            err_sq[key] += corr_err[key]
            norm_sq[key] += corr_norm[key]

    # Newton seminorm of the time derivative of the velocity error
    solver = make_newton_solver(sx, problem.c2, n)
    B = sx.tabulate(xq, 0)

    def neh_sq(mat):
        moments = B.T @ (mat * wx[:, None])
        z = solver.solve_K(moments)
        return float(wt_e @ np.einsum("aq,aq->q", moments, z))

    if "dtV" in E:
        err_neh_sq, norm_neh_sq = neh_sq(E["dtV"]), neh_sq(XV["dtV"])
    else:
        err_neh_sq = norm_neh_sq = 0.0

    err_veh_sq = (
        err_sq[("dtU", True)] + err_neh_sq + err_sq[("cgradU", True)] + err_sq[("V", True)]
    )
    norm_veh_sq = (
        norm_sq[("dtU", True)] + norm_neh_sq + norm_sq[("cgradU", True)] + norm_sq[("V", True)]
    )

    def component(key_err, key_norm):
        value = np.sqrt(max(key_err, 0.0))
        if not relative:
            return value
        norm = np.sqrt(max(key_norm, 0.0))
        return value / norm if norm > 0 else value

    return ErrorReport(
        err_dtU_L2e=component(err_sq[("dtU", True)], norm_sq[("dtU", True)]),
        err_dtV_Neh=component(err_neh_sq, norm_neh_sq),
        err_cgradU_L2e=component(err_sq[("cgradU", True)], norm_sq[("cgradU", True)]),
        err_V_L2e=component(err_sq[("V", True)], norm_sq[("V", True)]),
        err_Veh=component(err_veh_sq, norm_veh_sq),
        err_U_L2e=component(err_sq[("U", True)], norm_sq[("U", True)]),
        err_U_L2=component(err_sq[("U", False)], norm_sq[("U", False)]),
        err_V_L2=component(err_sq[("V", False)], norm_sq[("V", False)]),
        relative=relative,
    )


def project_space(w, dw, space_x, c2, n_quad=None):
    """Elliptic projection in space: coefficients of the best approximation
    of w in the c^2-weighted gradient seminorm."""
    n = n_quad or space_x.degree + 3
    xq, wx = panel_points(space_x.breakpoints, n)
    K = assemble_space_matrix(space_x, space_x, 1, 1, c2, n_points=n).matrix
    dB = space_x.tabulate(xq, 1)
    g = dB.T @ (wx * c2(xq) * dw(xq))
    return sla.cho_solve(sla.cho_factor(K), g)


def project_time(w, dw, space_t, T, n_quad=None):
    """Elliptic projection in time: weighted normal equations in the
    derivative inner product, zero-left trial basis."""
    n = n_quad or space_t.degree + 3
    test = test_space_of(space_t)
    tq, wt = panel_points(space_t.breakpoints, n)
    wt_e = wt * np.exp(-tq / T)
    S = assemble_time_matrix(space_t, test, 1, 0, T, n_points=n).matrix
    dB = space_t.tabulate(tq, 1)
    r = dB.T @ (wt_e * dw(tq))
    return sla.cho_solve(sla.cho_factor(S), r)


def commutation_check(dxdt_w, space_x, space_t, c2, T, n_quad=None):
    """Norm of the commutator of the space and time elliptic projectors.

    dxdt_w(x, t) is the mixed derivative of the projected function; it is all
    the data both compositions need.  Returns (commutator norm, coefficients
    of time-then-space composition, coefficients of space-then-time
    composition); coefficient arrays are (space dim, time dim).
    """
    n = n_quad or max(space_x.degree, space_t.degree) + 3
    xq, wx = panel_points(space_x.breakpoints, n)
    tq, wt = panel_points(space_t.breakpoints, n)
    wt_e = wt * np.exp(-tq / T)
    c2x = c2(xq)
    W = np.broadcast_to(
        np.asarray(dxdt_w(xq[:, None], tq[None, :]), dtype=float), (xq.size, tq.size)
    )
    test_t = test_space_of(space_t)
    K = assemble_space_matrix(space_x, space_x, 1, 1, c2, n_points=n).matrix
    S = assemble_time_matrix(space_t, test_t, 1, 0, T, n_points=n).matrix
    M_x = assemble_space_matrix(space_x, space_x, 0, 0, n_points=n).matrix
    M_e = assemble_time_matrix(space_t, space_t, 0, 0, T, n_points=n).matrix
    dBx = space_x.tabulate(xq, 1)
    dBt = space_t.tabulate(tq, 1)
    K_cho, S_cho = sla.cho_factor(K), sla.cho_factor(S)

    # time projection first: per x-node time moments, then space projection
    r_x = W @ (dBt * wt_e[:, None])  # (n_qx, n_t)
    zeta_dx = sla.cho_solve(S_cho, r_x.T).T  # d/dx of the time coefficients
    g = dBx.T @ (zeta_dx * (wx * c2x)[:, None])  # (n_x, n_t)
    A = sla.cho_solve(K_cho, g)

    # space projection first: per t-node space moments, then time projection
    s_t = W.T @ (dBx * (wx * c2x)[:, None])  # (n_qt, n_x)
    y_dt = sla.cho_solve(K_cho, s_t.T).T  # d/dt of the space coefficients
    rho = y_dt.T @ (dBt * wt_e[:, None])  # (n_x, n_t)
    B = sla.cho_solve(S_cho, rho.T).T

    D = A - B
    norm = np.sqrt(max(float(np.sum((M_x @ D @ M_e) * D)), 0.0))
    return norm, A, B


def _gram_matrices(system):
    """Trial (V_eh) and test (W_eh) Gram matrices of the discrete norms."""
    solver_N = sla.cho_factor(system.K_x)
    N = system.M_x @ sla.cho_solve(solver_N, system.M_x)
    X_U = np.kron(system.S_e, system.M_x) + np.kron(system.M_e, system.K_x)
    X_V = np.kron(system.S_e, N) + np.kron(system.M_e, system.M_x)
    Y_lam = np.kron(system.S_e, system.M_x)
    Y_chi = np.kron(system.S_e, N)
    X = sla.block_diag(X_U, X_V)
    Y = sla.block_diag(Y_lam, Y_chi)
    return X, Y


def estimate_infsup(problem, space_x, space_t, n_quad=None):
    """Smallest generalized singular value of the block form in the discrete
    trial/test norm pair."""
    from .system import assemble

    system = assemble(problem, space_x, space_t, n_quad)
    if system.size > 2000:
        raise ValueError(f"system size {system.size} too large for a dense eigensolve")
    B = system.matrix.toarray()
    X, Y = _gram_matrices(system)
    YinvB = sla.cho_solve(sla.cho_factor(Y), B)
    A = B.T @ YinvB
    lam = sla.eigh(A, X, eigvals_only=True, subset_by_index=[0, 0])[0]
    return InfSupEstimate(
        gamma_h=float(np.sqrt(max(lam, 0.0))),
        lower_bound=infsup_lower_bound(problem),
        dims=(system.n_x, system.n_t),
    )


def discrete_veh_norm(system, solution):
    """Stability norm of the discrete (shifted) solution of the block system."""
    Cu, Cv = solution.u_coeffs, solution.v_coeffs
    N = system.M_x @ sla.cho_solve(sla.cho_factor(system.K_x), system.M_x)
    q = (
        np.sum((system.M_x @ Cu @ system.S_e) * Cu)
        + np.sum((system.K_x @ Cu @ system.M_e) * Cu)
        + np.sum((N @ Cv @ system.S_e) * Cv)
        + np.sum((system.M_x @ Cv @ system.M_e) * Cv)
    )
    return np.sqrt(max(float(q), 0.0))


def stability_data_bound(problem, n_quad=12, n_elements=64):
    """Upper bound on the stability norm in terms of the problem data."""
    beta = 1.0 / infsup_lower_bound(problem)
    if problem.div_c2_grad_U0 is None:
        raise ValueError("problem does not provide div(c^2 grad U0)")
    T = problem.T
    xs = np.linspace(problem.omega[0], problem.omega[1], n_elements + 1)
    ts = np.linspace(0.0, T, n_elements + 1)
    xq, wx = panel_points(xs, n_quad)
    tq, wt = panel_points(ts, n_quad)
    wt_e = wt * np.exp(-tq / T)
    Fv = np.broadcast_to(
        np.asarray(problem.F(xq[:, None], tq[None, :]), dtype=float), (xq.size, tq.size)
    )
    norm_F = np.sqrt(float(wx @ Fv**2 @ wt_e))
    norm_div = np.sqrt(float(wx @ problem.div_c2_grad_U0(xq) ** 2))
    if problem.dV0 is None:
        norm_cgradV0 = 0.0
    else:
        norm_cgradV0 = np.sqrt(float(wx @ (problem.c2(xq) * problem.dV0(xq) ** 2)))
    return beta * (norm_F + np.sqrt(T) * norm_div + np.sqrt(T) * norm_cgradV0)

import numpy as np
import pytest

import xtwave as xw
from xtwave import analysis
from xtwave.quadrature import panel_points


def test_eoc():
    assert np.allclose(analysis.eoc([1.0, 0.25, 0.0625]), [2.0, 2.0])


def test_infsup_lower_bound_values(smooth_problem, unit_problem):
    # arithmetic from 1 / (2 sqrt(C^2/c0^2 + 4 T^2)) with C = |Omega| / pi
    assert analysis.infsup_lower_bound(unit_problem) == pytest.approx(
        1.0 / (2.0 * np.sqrt(1.0 / np.pi**2 + 4.0)), rel=1e-14
    )
    assert analysis.infsup_lower_bound(smooth_problem) == pytest.approx(
        1.0 / (2.0 * np.sqrt(1.0 / np.pi**2 + 36.0)), rel=1e-14
    )
    # four significant digits of the closed forms
    assert analysis.infsup_lower_bound(unit_problem) == pytest.approx(0.246893, abs=1e-6)
    assert analysis.infsup_lower_bound(smooth_problem) == pytest.approx(0.083216, abs=1e-6)


def test_zero_data_errors(unit_problem):
    from dataclasses import replace

    zeros_x = unit_problem.U0
    exact = xw.ExactSolution(
        u=lambda x, t: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t))),
        dx_u=lambda x, t: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t))),
        v=lambda x, t: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t))),
        dt_v=lambda x, t: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t))),
    )
    prob = replace(unit_problem, exact=exact)
    sx = xw.make_uniform_space(prob.omega, 4, 2, None, "zero-both")
    st = xw.make_uniform_space((0.0, prob.T), 4, 2, None, "zero-left")
    sol = xw.solve(xw.assemble(prob, sx, st))
    rep = xw.error_report(sol, prob)
    assert rep.err_Veh == 0.0
    assert rep.err_U_L2 == 0.0
    assert rep.err_V_L2e == 0.0


def test_error_report_component_sum(smooth_problem, smooth_solution_cache):
    _, sol = smooth_solution_cache(2, 1, 8, 24)
    rep = xw.error_report(sol, smooth_problem, relative=False)
    total = np.sqrt(
        rep.err_dtU_L2e**2 + rep.err_dtV_Neh**2 + rep.err_cgradU_L2e**2 + rep.err_V_L2e**2
    )
    assert rep.err_Veh == pytest.approx(total, rel=1e-12)
    for value in (rep.err_Veh, rep.err_U_L2e, rep.err_U_L2, rep.err_V_L2, rep.err_dtV_Neh):
        assert value >= 0.0


def test_space_projector_idempotent_and_stable(smooth_problem, rng):
    prob = smooth_problem
    space = xw.make_uniform_space(prob.omega, 8, 2, None, "zero-both")
    xq, wx = panel_points(space.breakpoints, 8)
    c2q = prob.c2(xq)
    # idempotence: a function already in the space projects to itself
    coeffs = rng.standard_normal(space.dim)
    z = analysis.project_space(
        lambda x: space.evaluate(coeffs, x),
        lambda x: space.evaluate(coeffs, x, 1),
        space,
        prob.c2,
    )
    assert np.max(np.abs(z - coeffs)) < 1e-10
    # stability in the weighted gradient seminorm
    w = lambda x: np.sin(3 * np.pi * x) + x * (1 - x)
    dw = lambda x: 3 * np.pi * np.cos(3 * np.pi * x) + 1 - 2 * x
    z = analysis.project_space(w, dw, space, prob.c2, n_quad=8)
    proj_grad = np.sqrt(wx @ (c2q * space.evaluate(z, xq, 1) ** 2))
    full_grad = np.sqrt(wx @ (c2q * dw(xq) ** 2))
    assert proj_grad <= full_grad + 1e-12
    # best approximation: normal equations give the same minimizer
    from xtwave.forms import assemble_space_matrix
    import scipy.linalg as sla

    K = assemble_space_matrix(space, space, 1, 1, prob.c2, n_points=8).matrix
    dB = space.tabulate(xq, 1)
    z2 = sla.solve(K, dB.T @ (wx * c2q * dw(xq)), assume_a="pos")
    assert np.max(np.abs(z - z2)) < 1e-12


def test_time_projector_idempotent_and_stable(rng):
    T = 3.0
    space = xw.make_uniform_space((0.0, T), 8, 2, None, "zero-left")
    tq, wt = panel_points(space.breakpoints, 8)
    we = wt * np.exp(-tq / T)
    coeffs = rng.standard_normal(space.dim)
    z = analysis.project_time(
        lambda t: space.evaluate(coeffs, t),
        lambda t: space.evaluate(coeffs, t, 1),
        space,
        T,
    )
    assert np.max(np.abs(z - coeffs)) < 1e-10
    w = lambda t: np.sin(1.25 * np.pi * t) ** 2
    dw = lambda t: 1.25 * np.pi * np.sin(2.5 * np.pi * t)
    z = analysis.project_time(w, dw, space, T)
    proj = np.sqrt(we @ space.evaluate(z, tq, 1) ** 2)
    full = np.sqrt(we @ dw(tq) ** 2)
    assert proj <= full + 1e-12


def test_time_projector_aubin_nitsche_gap():
    # the weighted L2 projection error gains one order over the derivative
    # error under temporal refinement
    T = 3.0
    w = lambda t: np.sin(1.25 * np.pi * t) ** 2
    dw = lambda t: 1.25 * np.pi * np.sin(2.5 * np.pi * t)
    errs_l2, errs_h1 = [], []
    for nt in (8, 16, 32, 64):
        space = xw.make_uniform_space((0.0, T), nt, 2, None, "zero-left")
        z = analysis.project_time(w, dw, space, T)
        tq, wt = panel_points(space.breakpoints, 8)
        we = wt * np.exp(-tq / T)
        errs_l2.append(np.sqrt(we @ (space.evaluate(z, tq) - w(tq)) ** 2))
        errs_h1.append(np.sqrt(we @ (space.evaluate(z, tq, 1) - dw(tq)) ** 2))
    gap = analysis.eoc(errs_l2)[-1] - analysis.eoc(errs_h1)[-1]
    assert gap == pytest.approx(1.0, abs=0.15)


def test_commutation_separable(smooth_problem):
    prob = smooth_problem
    sx = xw.make_uniform_space(prob.omega, 6, 2, None, "zero-both")
    st = xw.make_uniform_space((0.0, prob.T), 6, 2, None, "zero-left")
    dxdt_w = lambda x, t: np.cos(np.pi * x) * np.exp(-t)  # separable mixed derivative
    norm, A, B = analysis.commutation_check(dxdt_w, sx, st, prob.c2, prob.T)
    assert norm < 1e-12
    assert np.max(np.abs(A - B)) < 1e-11


def test_commutation_smooth_exact(smooth_problem):
    prob = smooth_problem
    sx = xw.make_uniform_space(prob.omega, 8, 2, None, "zero-both")
    st = xw.make_uniform_space((0.0, prob.T), 8, 2, None, "zero-left")
    norm, _, _ = analysis.commutation_check(prob.exact.dxdt_u, sx, st, prob.c2, prob.T)
    assert norm < 1e-10


def test_infsup_examples(smooth_problem, unit_problem):
    sx = xw.make_uniform_space(smooth_problem.omega, 4, 1, None, "zero-both")
    st = xw.make_uniform_space((0.0, smooth_problem.T), 4, 1, None, "zero-left")
    est = xw.estimate_infsup(smooth_problem, sx, st)
    assert est.gamma_h >= est.lower_bound - 1e-10
    # refinement never drops gamma_h below the mesh-independent bound
    for ne in (2, 4, 8):
        sx = xw.make_uniform_space(unit_problem.omega, ne, 2, None, "zero-both")
        st = xw.make_uniform_space((0.0, unit_problem.T), ne, 2, None, "zero-left")
        est = xw.estimate_infsup(unit_problem, sx, st)
        assert est.gamma_h >= est.lower_bound - 1e-10


def test_infsup_size_cap(smooth_problem):
    sx = xw.make_uniform_space(smooth_problem.omega, 64, 2, None, "zero-both")
    st = xw.make_uniform_space((0.0, smooth_problem.T), 64, 2, None, "zero-left")
    with pytest.raises(ValueError):
        xw.estimate_infsup(smooth_problem, sx, st)


def test_stability_norm_below_data_bound(smooth_problem, smooth_solution_cache):
    system, sol = smooth_solution_cache(2, 1, 8, 24)
    norm = analysis.discrete_veh_norm(system, sol)
    bound = xw.stability_data_bound(smooth_problem)
    assert 0 < norm <= bound

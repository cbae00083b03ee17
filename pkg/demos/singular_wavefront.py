"""Traveling wavefront with a velocity jump: reduced convergence rates.

The exact velocity jumps across the line x - t + 1 = 0, so the L2 rates are
limited to about 3/2 for the displacement and 1/2 for the velocity no matter
the spline degree.  The mesh places a breakpoint at the initial kink x = -1.
"""

import numpy as np

import xtwave as xw
from xtwave import analysis

problem = xw.by_name("singular").spec

for p in (2, 3):
    err_u, err_v = [], []
    ks = (2, 3, 4, 5)
    for k in ks:
        space_x = xw.make_uniform_space(problem.omega, 3 * 2**k, p, None, "zero-both")
        space_t = xw.make_uniform_space((0.0, problem.T), 2**k, p, None, "zero-left")
        solution = xw.solve(xw.assemble(problem, space_x, space_t))
        rep = xw.error_report(solution, problem)
        err_u.append(rep.err_U_L2)
        err_v.append(rep.err_V_L2)

    ru = analysis.eoc(err_u)
    rv = analysis.eoc(err_v)
    print(f"\ndegree p={p} (maximal regularity)")
    print(f"{'h':>10} {'err_U_L2':>12} {'rate':>6} {'err_V_L2':>12} {'rate':>6}")
    for i, k in enumerate(ks):
        su = f"{ru[i - 1]:.2f}" if i else "   -"
        sv = f"{rv[i - 1]:.2f}" if i else "   -"
        print(f"{2.0**-k:>10.4f} {err_u[i]:>12.3e} {su:>6} {err_v[i]:>12.3e} {sv:>6}")
    print(f"mean slopes: U {np.mean(ru):.3f} (limit 3/2), V {np.mean(rv):.3f} (limit 1/2)")

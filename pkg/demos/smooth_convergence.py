"""Convergence study on the smooth standing-wave benchmark.

Refines space and time together (h_t = h_x) and prints the error table for a
few spline families.  Expected rates: p in the energy-type norm, p+1 for the
weighted L2 errors of both solution components.
"""

import numpy as np

import xtwave as xw
from xtwave import analysis

FAMILIES = [(1, 0, "maximal"), (2, 1, "maximal"), (3, 1, "C1")]
LEVELS = (2, 4, 8, 16, 32)

problem = xw.by_name("smooth").spec

for p, r, label in FAMILIES:
    reports = []
    for n_x in LEVELS:
        space_x = xw.make_uniform_space(problem.omega, n_x, p, r, "zero-both")
        space_t = xw.make_uniform_space((0.0, problem.T), 3 * n_x, p, r, "zero-left")
        solution = xw.solve(xw.assemble(problem, space_x, space_t))
        reports.append(xw.error_report(solution, problem))

    print(f"\ndegree p={p}, {label} regularity")
    print(f"{'n_x':>5} {'err_Veh':>12} {'rate':>6} {'err_U_L2e':>12} {'rate':>6} "
          f"{'err_V_L2e':>12} {'rate':>6}")
    veh = [rep.err_Veh for rep in reports]
    eu = [rep.err_U_L2e for rep in reports]
    ev = [rep.err_V_L2e for rep in reports]
    rates = [np.concatenate([[np.nan], analysis.eoc(e)]) for e in (veh, eu, ev)]
    for i, n_x in enumerate(LEVELS):
        print(f"{n_x:>5} {veh[i]:>12.3e} {rates[0][i]:>6.2f} {eu[i]:>12.3e} "
              f"{rates[1][i]:>6.2f} {ev[i]:>12.3e} {rates[2][i]:>6.2f}")

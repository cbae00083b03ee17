import numpy as np
import pytest

import xtwave as xw


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def smooth_problem():
    return xw.smooth_case().spec


@pytest.fixture(scope="session")
def singular_problem():
    return xw.singular_case().spec


@pytest.fixture(scope="session")
def unit_problem():
    """T = 1, c = 1 variant on (0, 1) with homogeneous data."""
    zeros_x = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return xw.ProblemSpec(
        omega=(0.0, 1.0),
        T=1.0,
        c2=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        c0=1.0,
        F=lambda x, t: np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t))),
        U0=zeros_x,
        dU0=zeros_x,
        V0=zeros_x,
        dV0=zeros_x,
        name="unit",
    )


@pytest.fixture(scope="session")
def smooth_solution_cache(smooth_problem):
    """Shared solves of the smooth problem, keyed by (p, r, n_x, n_t)."""
    cache = {}

    def get(p, r, n_x, n_t):
        key = (p, r, n_x, n_t)
        if key not in cache:
            sx = xw.make_uniform_space(smooth_problem.omega, n_x, p, r, "zero-both")
            st = xw.make_uniform_space((0.0, smooth_problem.T), n_t, p, r, "zero-left")
            system = xw.assemble(smooth_problem, sx, st)
            cache[key] = (system, xw.solve(system))
        return cache[key]

    return get

"""Univariate matrices: the Kronecker factors of every block and norm.

Time matrices carry the exponential weight exp(-t/T); space matrices carry a
pointwise coefficient (typically the squared wave speed).
"""

from dataclasses import dataclass

import numpy as np

from .errors import AssemblyError, DomainMismatchError
from .quadrature import panel_points


@dataclass(frozen=True)
class UnivariateForm:
    """Rectangular matrix of integrals of (derivatives of) basis products."""

    trial: object
    test: object
    d_trial: int
    d_test: int
    weight: str  # "expT" or "one"
    matrix: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape


def _check_same_interval(trial, test):
    a0, b0 = trial.interval
    a1, b1 = test.interval
    if abs(a0 - a1) > 1e-12 or abs(b0 - b1) > 1e-12:
        raise DomainMismatchError(
            f"trial interval ({a0}, {b0}) does not match test interval ({a1}, {b1})"
        )


def default_n_points(trial, test):
    """Exact for the polynomial part plus two points for analytic factors."""
    return max(trial.degree, test.degree) + 2


def _weighted_gram(trial, test, d_trial, d_test, factor, n_points):
    xq, wq = panel_points(trial.breakpoints, n_points)
    fvals = factor(xq)
    if not np.all(np.isfinite(fvals)):
        raise AssemblyError("coefficient is non-finite at a quadrature node")
    b_test = test.tabulate(xq, d_test)
    b_trial = trial.tabulate(xq, d_trial)
    return b_test.T @ (b_trial * (wq * fvals)[:, None])


def assemble_time_matrix(trial, test, d_trial, d_test, T, n_points=None):
    """Matrix of time integrals with weight exp(-t/T)."""
    _check_same_interval(trial, test)
    a, b = trial.interval
    if abs(a) > 1e-12 or abs(b - T) > 1e-12:
        raise DomainMismatchError(f"time spaces must live on (0, {T}), got ({a}, {b})")
    n = n_points or default_n_points(trial, test)
    matrix = _weighted_gram(trial, test, d_trial, d_test, lambda t: np.exp(-t / T), n)
    return UnivariateForm(trial, test, d_trial, d_test, "expT", matrix)


def assemble_space_matrix(trial, test, d_trial, d_test, coefficient=None, n_points=None):
    """Matrix of unweighted space integrals with a pointwise coefficient."""
    _check_same_interval(trial, test)
    if coefficient is None:
        coefficient = np.ones_like
    n = n_points or default_n_points(trial, test)
    matrix = _weighted_gram(trial, test, d_trial, d_test, coefficient, n)
    return UnivariateForm(trial, test, d_trial, d_test, "one", matrix)

"""Univariate B-spline spaces on an interval.

Open (clamped) knot vectors with uniform interior multiplicity control the
inter-element regularity r = degree - multiplicity.  Boundary conditions are
imposed strongly by dropping the first and/or last basis function.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidRegularityError, InvalidTestSpaceError, OutOfDomainError

CONSTRAINTS = ("none", "zero-left", "zero-both")


@dataclass(frozen=True)
class KnotVector:
    """Breakpoint mesh plus degree and uniform interior knot multiplicity."""

    breakpoints: np.ndarray
    degree: int
    interior_multiplicity: int = 1

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        object.__setattr__(self, "breakpoints", bp)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("breakpoints must be a 1d array with at least 2 entries")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        m = self.interior_multiplicity
        if not (1 <= m <= max(self.degree, 1)):
            raise InvalidRegularityError(
                f"interior multiplicity {m} not in [1, {self.degree}] for degree {self.degree}"
            )

    @property
    def interval(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def n_elements(self):
        return self.breakpoints.size - 1

    @property
    def h_max(self):
        return float(np.max(np.diff(self.breakpoints)))

    @property
    def regularity(self):
        return self.degree - self.interior_multiplicity

    def full_knots(self):
        """Open knot sequence: endpoints repeated degree+1 times."""
        p = self.degree
        interior = np.repeat(self.breakpoints[1:-1], self.interior_multiplicity)
        return np.concatenate(
            (
                np.full(p + 1, self.breakpoints[0]),
                interior,
                np.full(p + 1, self.breakpoints[-1]),
            )
        )


def _find_span(knots, p, x):
    """Index i with knots[i] <= x < knots[i+1], clamped to the last element."""
    n = knots.size - p - 1  # number of basis functions
    if x >= knots[n]:
        return n - 1
    return int(np.searchsorted(knots, x, side="right") - 1)


def _ders_basis_funs(knots, p, span, x, n_ders):
    """Values and derivatives of the p+1 B-splines active on the span at x.

    Returns an array of shape (n_ders + 1, p + 1); standard triangular-table
    recursion (Cox-de Boor for values, inverted-table differences for
    derivatives).
    """
    ndu = np.zeros((p + 1, p + 1))
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders = np.zeros((n_ders + 1, p + 1))
    ders[0, :] = ndu[:, p]
    a = np.zeros((2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, n_ders + 1):
            d = 0.0
            rk = r - k
            pk = p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1
    fac = float(p)
    for k in range(1, n_ders + 1):
        ders[k, :] *= fac
        fac *= p - k
    return ders


@dataclass(frozen=True)
class BasisEval:
    """Active basis values at a point, indices in constrained numbering."""

    first_active_index: int
    values: np.ndarray


@dataclass(frozen=True)
class SplineSpace:
    """B-spline space on an interval with optional homogeneous constraints."""

    knots: KnotVector
    constraint: str = "none"
    _full_knots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.constraint not in CONSTRAINTS:
            raise ValueError(f"unknown constraint {self.constraint!r}")
        object.__setattr__(self, "_full_knots", self.knots.full_knots())

    @property
    def degree(self):
        return self.knots.degree

    @property
    def interval(self):
        return self.knots.interval

    @property
    def n_elements(self):
        return self.knots.n_elements

    @property
    def breakpoints(self):
        return self.knots.breakpoints

    @property
    def _left_removed(self):
        return 1 if self.constraint in ("zero-left", "zero-both") else 0

    @property
    def _right_removed(self):
        return 1 if self.constraint == "zero-both" else 0

    @property
    def dim_unconstrained(self):
        return self._full_knots.size - self.degree - 1

    @property
    def dim(self):
        return self.dim_unconstrained - self._left_removed - self._right_removed

    def eval_basis(self, x, deriv_order=0):
        """All basis functions active at x, differentiated deriv_order times."""
        a, b = self.interval
        if not (a - 1e-14 <= x <= b + 1e-14):
            raise OutOfDomainError(f"point {x} outside [{a}, {b}]")
        x = min(max(x, a), b)
        if deriv_order > self.degree:
            raise ValueError("derivative order exceeds degree")
        knots = self._full_knots
        p = self.degree
        span = _find_span(knots, p, x)
        vals = _ders_basis_funs(knots, p, span, x, deriv_order)[deriv_order]
        first = span - p - self._left_removed
        lo = max(0, -first)
        hi = min(p + 1, self.dim - first)
        return BasisEval(first_active_index=first + lo, values=vals[lo:hi].copy())

    def tabulate(self, xs, deriv_order=0):
        """Dense matrix of basis values, shape (len(xs), dim)."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.zeros((xs.size, self.dim))
        for i, x in enumerate(xs):
            be = self.eval_basis(x, deriv_order)
            out[i, be.first_active_index : be.first_active_index + be.values.size] = be.values
        return out

    def evaluate(self, coeffs, xs, deriv_order=0):
        """Evaluate the spline with the given coefficients at points xs."""
        return self.tabulate(xs, deriv_order) @ np.asarray(coeffs, dtype=float)


class DerivativeTestSpace:
    """View whose basis functions are time derivatives of a zero-left trial basis.

    Same dimension as the trial space, so the Petrov-Galerkin pairing is
    square.  Evaluation delegates to the trial basis with the derivative
    order shifted by one.
    """

    def __init__(self, trial):
        if trial.constraint != "zero-left":
            raise InvalidTestSpaceError("test space requires a zero-left trial space")
        self.trial = trial

    @property
    def degree(self):
        return self.trial.degree

    @property
    def dim(self):
        return self.trial.dim

    @property
    def interval(self):
        return self.trial.interval

    @property
    def breakpoints(self):
        return self.trial.breakpoints

    def eval_basis(self, x, deriv_order=0):
        return self.trial.eval_basis(x, deriv_order + 1)

    def tabulate(self, xs, deriv_order=0):
        return self.trial.tabulate(xs, deriv_order + 1)


def test_space_of(trial):
    """Derivative-of-trial test space for the Petrov-Galerkin pairing."""
    return DerivativeTestSpace(trial)


def make_space(breakpoints, degree, interior_multiplicity=1, constraint="none"):
    """Spline space on an arbitrary breakpoint mesh."""
    return SplineSpace(
        KnotVector(np.asarray(breakpoints, dtype=float), degree, interior_multiplicity),
        constraint,
    )


def make_uniform_space(interval, n_elements, degree, regularity=None, constraint="none"):
    """Uniform-mesh spline space with prescribed inter-element regularity.

    regularity defaults to degree-1 (maximal regularity, simple interior
    knots).
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if regularity is None:
        regularity = degree - 1
    if not (0 <= regularity <= degree - 1):
        raise InvalidRegularityError(
            f"regularity {regularity} not in [0, {degree - 1}] for degree {degree}"
        )
    a, b = float(interval[0]), float(interval[1])
    breakpoints = np.linspace(a, b, n_elements + 1)
    return make_space(breakpoints, degree, degree - regularity, constraint)

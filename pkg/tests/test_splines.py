import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xtwave import splines
from xtwave.errors import InvalidRegularityError, InvalidTestSpaceError, OutOfDomainError


def test_dimension_examples():
    s = splines.make_uniform_space((0.0, 1.0), 4, 2, 1, "none")
    assert s.dim == 6
    s = splines.make_uniform_space((0.0, 1.0), 4, 3, 1, "none")
    assert s.dim == 10
    s = splines.make_uniform_space((0.0, 3.0), 8, 1, 0, "zero-left")
    assert s.dim == 8


def test_dimension_formula():
    # dim = (p+1) + sum of interior multiplicities - constrained endpoints
    for p in (1, 2, 3, 4):
        for m in range(1, p + 1):
            for ne in (1, 2, 5):
                for constraint, removed in (("none", 0), ("zero-left", 1), ("zero-both", 2)):
                    s = splines.make_space(np.linspace(0, 1, ne + 1), p, m, constraint)
                    assert s.dim == (p + 1) + (ne - 1) * m - removed


@settings(max_examples=60, deadline=None)
@given(
    p=st.integers(1, 4),
    ne=st.integers(1, 8),
    x=st.floats(0.0, 1.0, allow_nan=False),
)
def test_partition_of_unity(p, ne, x):
    s = splines.make_uniform_space((0.0, 1.0), ne, p, None, "none")
    be = s.eval_basis(x, 0)
    assert be.values.size <= p + 1
    assert abs(be.values.sum() - 1.0) < 1e-12
    assert np.all(be.values >= -1e-14)


def test_hat_derivative():
    s = splines.make_uniform_space((0.0, 1.0), 4, 1, 0, "none")
    be = s.eval_basis(0.3, 1)
    assert sorted(np.round(be.values, 10)) == [-4.0, 4.0]


def test_constraints_vanish_at_endpoints():
    for constraint in ("zero-left", "zero-both"):
        s = splines.make_uniform_space((0.0, 2.0), 5, 3, None, constraint)
        left = s.tabulate([0.0], 0)
        assert np.allclose(left, 0.0)
        right = s.tabulate([2.0], 0)
        if constraint == "zero-both":
            assert np.allclose(right, 0.0)
        else:
            assert np.max(np.abs(right)) > 0.5


def test_regularity_across_breakpoints():
    # derivative jumps vanish up to order r = p - multiplicity
    for p, m in ((3, 1), (3, 2), (4, 2)):
        s = splines.make_space(np.linspace(0, 1, 5), p, m, "none")
        r = p - m
        eps = 1e-9
        for bp in s.breakpoints[1:-1]:
            for d in range(r + 1):
                lv = s.tabulate([bp - eps], d)
                rv = s.tabulate([bp + eps], d)
                assert np.max(np.abs(lv - rv)) < 1e-4


def test_spline_reproduces_polynomials():
    # least-squares fit of x^k is exact for k <= p
    s = splines.make_uniform_space((0.0, 1.0), 4, 3, 1, "none")
    xs = np.linspace(0, 1, 80)
    B = s.tabulate(xs, 0)
    for k in range(4):
        coeffs, *_ = np.linalg.lstsq(B, xs**k, rcond=None)
        assert np.max(np.abs(B @ coeffs - xs**k)) < 1e-10


def test_out_of_domain():
    s = splines.make_uniform_space((0.0, 1.0), 4, 2)
    with pytest.raises(OutOfDomainError):
        s.eval_basis(1.5, 0)


def test_invalid_regularity():
    with pytest.raises(InvalidRegularityError):
        splines.make_uniform_space((0.0, 1.0), 4, 2, regularity=2)
    with pytest.raises(InvalidRegularityError):
        splines.make_space(np.linspace(0, 1, 5), 2, 3)


def test_increasing_breakpoints_required():
    with pytest.raises(ValueError):
        splines.make_space([0.0, 0.5, 0.5, 1.0], 2)


def test_derivative_test_space():
    trial = splines.make_uniform_space((0.0, 3.0), 8, 1, 0, "zero-left")
    test = splines.test_space_of(trial)
    assert test.dim == trial.dim == 8
    # piecewise constant: derivative inside an element is flat
    v = test.tabulate([0.1, 0.2], 0)
    assert np.allclose(v[0], v[1])
    # deriv_order 0 of the view equals first derivative of the trial basis
    xs = np.linspace(0, 3, 17)
    assert np.allclose(test.tabulate(xs, 0), trial.tabulate(xs, 1))


def test_test_space_requires_zero_left():
    trial = splines.make_uniform_space((0.0, 1.0), 4, 2, None, "zero-both")
    with pytest.raises(InvalidTestSpaceError):
        splines.test_space_of(trial)


def test_evaluate_linear_exact():
    # coefficients at Greville points reproduce w(t) = t
    s = splines.make_uniform_space((0.0, 1.0), 5, 1, 0, "zero-left")
    coeffs = s.breakpoints[1:]
    xs = np.linspace(0, 1, 23)
    assert np.max(np.abs(s.evaluate(coeffs, xs) - xs)) < 1e-13

import numpy as np
import pytest

from xtwave import expressions
from xtwave.errors import ConfigError


def test_parse_and_evaluate():
    expr = expressions.parse_expression("sin(pi*x) * exp(-t) + x^2 / 2")
    f = expressions.lambdify(expr, ("x", "t"))
    xs = np.linspace(0, 1, 7)
    ts = np.linspace(0, 2, 7)
    expected = np.sin(np.pi * xs) * np.exp(-ts) + xs**2 / 2
    assert np.allclose(f(xs, ts), expected)


def test_caret_is_power():
    expr = expressions.parse_expression("x^3", ("x",))
    f = expressions.lambdify(expr, ("x",))
    assert f(2.0) == pytest.approx(8.0)


def test_constant_expression_broadcasts():
    expr = expressions.parse_expression("0", ("x",))
    f = expressions.lambdify(expr, ("x",))
    assert f(np.linspace(0, 1, 5)).shape == (5,)


def test_derivative():
    expr = expressions.parse_expression("sin(pi*x)", ("x",))
    d = expressions.lambdify(expressions.diff(expr, "x"), ("x",))
    xs = np.linspace(0, 1, 9)
    assert np.allclose(d(xs), np.pi * np.cos(np.pi * xs))


def test_unknown_symbol_rejected():
    with pytest.raises(ConfigError):
        expressions.parse_expression("x + y")


def test_variable_restriction():
    with pytest.raises(ConfigError):
        expressions.parse_expression("x + t", ("x",))


def test_unsupported_function_rejected():
    with pytest.raises(ConfigError):
        expressions.parse_expression("log(x)")
    with pytest.raises(ConfigError):
        expressions.parse_expression("tan(x)")


def test_malformed_expression_rejected():
    with pytest.raises(ConfigError):
        expressions.parse_expression("sin(x")
    with pytest.raises(ConfigError):
        expressions.parse_expression("x +* t")

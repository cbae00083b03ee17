"""Small arithmetic expression grammar for config-defined problem data.

Supported: + - * / ^, sin, cos, exp, the constants pi and e-notation
numbers, and the variables x and t.  Backed by sympy so that derivatives of
the data (needed by the right-hand side) come for free.
"""

import numpy as np
import sympy as sp

from .errors import ConfigError

X, T = sp.symbols("x t")

_LOCALS = {"x": X, "t": T, "pi": sp.pi, "sin": sp.sin, "cos": sp.cos, "exp": sp.exp}
_ALLOWED_FUNCS = (sp.sin, sp.cos, sp.exp)


def parse_expression(text, variables=("x", "t")):
    """Parse an expression string, rejecting anything outside the grammar."""
    try:
        expr = sp.sympify(text.replace("^", "**"), locals=dict(_LOCALS))
    except (sp.SympifyError, SyntaxError, TypeError, AttributeError) as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc}") from exc
    allowed_symbols = {_LOCALS[v] for v in variables}
    extra = expr.free_symbols - allowed_symbols
    if extra:
        raise ConfigError(f"expression {text!r} uses unknown symbols {sorted(map(str, extra))}")
    for f in expr.atoms(sp.Function):
        if not isinstance(f, _ALLOWED_FUNCS):
            raise ConfigError(f"expression {text!r} uses unsupported function {f.func}")
    return expr


def lambdify(expr, variables):
    """Numpy-broadcasting callable of a sympy expression."""
    syms = [_LOCALS[v] for v in variables]
    raw = sp.lambdify(syms, expr, "numpy")

    def fn(*args):
        shape = np.broadcast_shapes(*(np.shape(a) for a in args))
        return np.broadcast_to(np.asarray(raw(*args), dtype=float), shape).copy()

    return fn


def diff(expr, variable):
    return sp.diff(expr, _LOCALS[variable])

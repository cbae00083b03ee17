"""Composite Gauss-Legendre quadrature on breakpoint meshes."""

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError, UnsupportedRuleError
from .splines import KnotVector

MAX_POINTS = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on the reference element (0, 1)."""

    nodes: np.ndarray
    weights: np.ndarray


def gauss_rule(n_points):
    """Gauss-Legendre rule with n_points nodes on (0, 1)."""
    if not (1 <= n_points <= MAX_POINTS):
        raise UnsupportedRuleError(f"n_points must be in [1, {MAX_POINTS}], got {n_points}")
    nodes, weights = np.polynomial.legendre.leggauss(n_points)
    return QuadratureRule(nodes=0.5 * (nodes + 1.0), weights=0.5 * weights)


def panel_points(breakpoints, n_points):
    """Nodes and weights of the composite rule over all elements.

    Returns flat arrays of length n_elements * n_points, element by element.
    """
    bp = np.asarray(breakpoints, dtype=float)
    rule = gauss_rule(n_points)
    lengths = np.diff(bp)
    xq = (bp[:-1, None] + lengths[:, None] * rule.nodes[None, :]).ravel()
    wq = (lengths[:, None] * rule.weights[None, :]).ravel()
    return xq, wq


def integrate(f, mesh, n_points):
    """Composite Gauss integral of f over the breakpoint mesh."""
    bp = mesh.breakpoints if isinstance(mesh, KnotVector) else np.asarray(mesh, dtype=float)
    xq, wq = panel_points(bp, n_points)
    vals = np.asarray(f(xq), dtype=float)
    if vals.shape != xq.shape:
        vals = np.broadcast_to(vals, xq.shape)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        node = float(xq[np.argmax(bad)])
        raise IntegrationError(f"non-finite integrand value at node {node}", node=node)
    return float(np.dot(wq, vals))

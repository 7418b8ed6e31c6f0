"""Generalised Hoelder (Finner) inequality as a numerical check.

For functions f_e on X^e over a finite uniform space and weights lambda_e
with sum_{e containing v} lambda_e <= 1 for every vertex v,

    E prod_e f_e(x_e) <= prod_e ||f_e||_{1/lambda_e}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from ..hypergraph import Hypergraph
from .contraction import contract

SLACK = 1e-10


@dataclass
class FinnerResult:
    lhs: float
    rhs: float
    holds: bool


def lp_norm(f: np.ndarray, exponent: float) -> float:
    """(mean |f|^exponent)^(1/exponent) under the uniform measure; sup norm for inf."""
    a = np.abs(np.asarray(f, dtype=float))
    if np.isinf(exponent):
        return float(a.max())
    return float(np.mean(a ** exponent) ** (1.0 / exponent))


def finner_check(F: Hypergraph, f, weights) -> FinnerResult:
    """``f`` is one table of shape (m,)*r used on every edge, or a list with one per edge."""
    tables = list(f) if isinstance(f, (list, tuple)) else [np.asarray(f)] * F.n_edges
    if len(tables) != F.n_edges:
        raise InputError("need one table per edge")
    weights = [float(w) for w in weights]
    if len(weights) != F.n_edges or any(w < 0 for w in weights):
        raise InputError("need one nonnegative weight per edge")
    for v in range(F.n_vertices):
        if sum(weights[i] for i in F.incidence[v]) > 1 + 1e-12:
            raise InputError(f"weights at vertex {v} sum to more than 1")
    m = tables[0].shape[0] if F.n_edges else 1
    for tab in tables:
        if tab.shape != (m,) * F.r or np.any(tab < 0):
            raise InputError("tables must be nonnegative with shape (m,)*r")
    lhs = contract(F, tables, m)
    rhs = 1.0
    for tab, w in zip(tables, weights):
        rhs *= lp_norm(tab, np.inf if w == 0 else 1.0 / w)
    return FinnerResult(lhs, rhs, lhs <= rhs * (1 + SLACK) + SLACK)


def finner_corollary(F: Hypergraph, f) -> FinnerResult:
    """t(F, f) <= ||f||_Delta^{|E(F)|}: weights 1/Delta on every edge."""
    d = F.max_degree
    if d == 0:
        raise InputError("graph has no edges")
    return finner_check(F, f, [1.0 / d] * F.n_edges)

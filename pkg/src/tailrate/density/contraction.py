"""Homomorphism densities by variable elimination.

t(H, G) = n^{-|V(H)|} sum over x in [n]^{V(H)} of prod over edges e of G(x_e).
Each edge of H contributes a copy of the kernel tensor; vertices are summed
out one at a time along a greedy minimum-fill order, so the cost is governed
by the largest intermediate support rather than by |V(H)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ..errors import CapacityError, InputError
from ..hypergraph import Hypergraph
from .weighted import WeightedRGraph, rsets


@dataclass(frozen=True)
class ContractionPlan:
    order: tuple[int, ...]
    supports: tuple[tuple[int, ...], ...]  # variables of the factor produced at each step
    width: int


def min_fill_order(var_sets, eliminate) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Greedy minimum-fill elimination of ``eliminate`` over factor scopes ``var_sets``."""
    adj: dict = {}
    for scope in var_sets:
        for v in scope:
            adj.setdefault(v, set()).update(u for u in scope if u != v)
    todo = set(eliminate)
    for v in todo:
        adj.setdefault(v, set())
    order, supports = [], []
    while todo:
        def fill(v):
            nb = list(adj[v])
            return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])

        v = min(todo, key=lambda v: (fill(v), len(adj[v]), v))
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a].update(u for u in nb if u != a)
        todo.discard(v)
        order.append(v)
        supports.append(tuple(sorted(nb)))
    return tuple(order), tuple(supports)


def make_plan(h: Hypergraph) -> ContractionPlan:
    order, supports = min_fill_order(h.edges, h.non_isolated)
    return ContractionPlan(order, supports, max((len(s) for s in supports), default=0))


MAX_ENTRIES = 10**8


def rainbow_block_counts(h: Hypergraph) -> list[int]:
    """a[k] = number of partitions of V(h) into k blocks with every edge meeting |e| blocks."""
    V = list(h.non_isolated)
    pos = {v: i for i, v in enumerate(V)}
    # edges checked when their last vertex is placed
    closing = [[] for _ in V]
    for e in h.edges:
        closing[max(pos[v] for v in e)].append([pos[v] for v in e])
    counts = [0] * (len(V) + 1)
    block = [0] * len(V)

    def rec(i, k):
        if i == len(V):
            counts[k] += 1
            return
        for b in range(k + 1):
            block[i] = b
            if all(len({block[j] for j in e}) == len(e) for e in closing[i]):
                rec(i + 1, max(k, b + 1))

    rec(0, 0)
    return counts


def constant_density(h: Hypergraph, n: int, q: float) -> float:
    """t(h, Q) for Q identically q off the diagonal, via falling factorials."""
    scale = float(n) ** len(h.non_isolated)
    total = sum(a * (math.perm(n, k) / scale) for k, a in enumerate(rainbow_block_counts(h)) if a)
    return total * q ** h.n_edges


def _eliminate(factors: list, order, n: int) -> list:
    """Average out each variable of ``order`` in turn; returns the remaining factors."""
    factors = list(factors)
    for v in order:
        touching = [f for f in factors if v in f[0]]
        if not touching:
            continue
        rest = [f for f in factors if v not in f[0]]
        out_vars = sorted({u for scope, _ in touching for u in scope if u != v})
        args = []
        for scope, arr in touching:
            args += [arr, list(scope)]
        new = np.einsum(*args, out_vars, optimize="greedy") / n
        rest.append((tuple(out_vars), new))
        factors = rest
    return factors


def contract(h: Hypergraph, tables, n: int, plan: ContractionPlan | None = None) -> float:
    """Mean over x in [n]^{V(h)} of prod_e tables[e](x_e); isolated vertices drop out."""
    plan = make_plan(h) if plan is None else plan
    if float(n) ** (plan.width + 1) > MAX_ENTRIES:
        raise CapacityError(f"contraction needs about n^{plan.width + 1} = {float(n) ** (plan.width + 1):.3g} "
                            f"entries, above the cap {MAX_ENTRIES}")
    factors = [(tuple(e), tables[i]) for i, e in enumerate(h.edges)]
    left = _eliminate(factors, plan.order, n)
    out = 1.0
    for scope, arr in left:
        if scope:
            raise AssertionError("elimination left a free variable")
        out *= float(arr)
    return out


def _check(h: Hypergraph, Q: WeightedRGraph):
    if h.r != Q.r:
        raise InputError(f"uniformity mismatch: pattern r={h.r}, weighted graph r={Q.r}")
    if Q.n < 1:
        raise InputError("weighted graph needs n >= 1")


def t_density(h: Hypergraph, Q: WeightedRGraph, plan: ContractionPlan | None = None,
              kernel: np.ndarray | None = None) -> float:
    """Homomorphism density of ``h`` in the weighted graph ``Q`` (diagonal weight 0)."""
    _check(h, Q)
    if kernel is None and not Q.overrides:
        return constant_density(h, Q.n, Q.default_q)
    K = Q.kernel() if kernel is None else kernel
    return contract(h, [K] * h.n_edges, Q.n, plan)


def t_density_kernel(h: Hypergraph, K: np.ndarray, plan: ContractionPlan | None = None) -> float:
    return contract(h, [K] * h.n_edges, K.shape[0], plan)


def gradient(h: Hypergraph, Q: WeightedRGraph, kernel: np.ndarray | None = None) -> np.ndarray:
    """d t(h, Q) / d q_S for every r-set S, in lexicographic order."""
    _check(h, Q)
    K = Q.kernel() if kernel is None else kernel
    return gradient_kernel(h, K)


def gradient_kernel(h: Hypergraph, K: np.ndarray) -> np.ndarray:
    n, r = K.shape[0], K.ndim
    total = np.zeros_like(K)
    ones = np.ones(n)
    for i, f in enumerate(h.edges):
        factors = [(tuple(e), K) for j, e in enumerate(h.edges) if j != i]
        others = [v for v in h.non_isolated if v not in f]
        order, _ = min_fill_order([s for s, _ in factors], others)
        left = _eliminate(factors, order, n)
        args = []
        for scope, arr in left:
            args += [arr, list(scope)]
        for v in f:
            args += [ones, [v]]
        M = np.einsum(*args, list(f), optimize="greedy")
        for perm in permutations(range(r)):
            total += np.transpose(M, perm)
    sets = rsets(n, r)
    return total[tuple(sets.T)] / n ** r

"""Fractional matchings, transversals and matchings, computed exactly.

The fractional matching number is found with a dense rational simplex
(Bland's rule); the optimal tableau also yields the optimal vertex weights
of the dual covering program, so every answer carries a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapacityError
from .hypergraph import Edge, Hypergraph

TRANSVERSAL_CAP = 10**6


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class LPCertificate:
    value: Fraction
    primal_weights: dict = field(hash=False)  # edge -> Fraction
    dual_weights: dict = field(hash=False)  # vertex -> Fraction

    def verify(self, h: Hypergraph) -> bool:
        """Re-check feasibility of both solutions and equality of objectives."""
        w, lam = self.primal_weights, self.dual_weights
        if set(w) != set(h.edges) or set(lam) != set(range(h.n_vertices)):
            return False
        if any(x < 0 for x in w.values()) or any(x < 0 for x in lam.values()):
            return False
        for v in range(h.n_vertices):
            if sum(w[h.edges[i]] for i in h.incidence[v]) > 1:
                return False
        for e in h.edges:
            if sum(lam[v] for v in e) < 1:
                return False
        return sum(w.values(), Fraction(0)) == self.value == sum(lam.values(), Fraction(0))

    def to_json(self) -> dict:
        return {
            "value": frac_str(self.value),
            "primal_weights": [[list(e), frac_str(x)] for e, x in sorted(self.primal_weights.items())],
            "dual_weights": {str(v): frac_str(x) for v, x in sorted(self.dual_weights.items())},
        }


def _simplex_max(A, b, c):
    """max c.x  s.t.  A x <= b, x >= 0, with b >= 0 (origin feasible).

    Returns (value, x, y) with y the optimal dual.  Bland's rule, exact.
    """
    m, n = len(A), len(c)
    # tableau columns: n structural + m slack, last entry is rhs
    T = [list(map(Fraction, row)) + [Fraction(int(i == k)) for k in range(m)] + [Fraction(b[i])]
         for i, row in enumerate(A)]
    z = [Fraction(x) for x in c] + [Fraction(0)] * m + [Fraction(0)]  # reduced costs; z[-1] = -objective
    basis = list(range(n, n + m))
    width = n + m
    while True:
        entering = next((j for j in range(width) if z[j] > 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                key = (T[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ArithmeticError("unbounded LP")  # cannot happen with b >= 0 and A >= 0 rows covering c
        i = best[1]
        piv = T[i][entering]
        row = [x / piv for x in T[i]]
        T[i] = row
        for k in range(m):
            if k != i and T[k][entering] != 0:
                f = T[k][entering]
                T[k] = [a - f * r_ for a, r_ in zip(T[k], row)]
        f = z[entering]
        z = [a - f * r_ for a, r_ in zip(z, row)]
        basis[i] = entering
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][-1]
    y = [-z[n + i] for i in range(m)]
    return -z[-1], x, y


def fractional_matching_number(h: Hypergraph) -> LPCertificate:
    """nu*(h) with an optimal fractional matching and an optimal fractional cover."""
    if h.n_edges == 0:
        return LPCertificate(Fraction(0), {}, {v: Fraction(0) for v in range(h.n_vertices)})
    A = [[1 if i in h.incidence[v] else 0 for i in range(h.n_edges)] for v in range(h.n_vertices)]
    value, x, y = _simplex_max(A, [1] * h.n_vertices, [1] * h.n_edges)
    cert = LPCertificate(value, dict(zip(h.edges, x)), dict(enumerate(y)))
    assert cert.verify(h), "simplex produced an inconsistent certificate"
    return cert


def nu_star(h: Hypergraph) -> Fraction:
    return fractional_matching_number(h).value


# -- transversals ----------------------------------------------------------

def _cover_search(h: Hypergraph, k: int, collect: bool, cap: int = TRANSVERSAL_CAP):
    """Transversals of size <= k found by branching on an uncovered edge.

    Branch i takes the i-th vertex of the edge and forbids the earlier ones,
    so no set is produced twice.  With ``collect`` False, stops at the first.
    """
    edges = [frozenset(e) for e in h.edges]
    deg = h.degrees
    found: list[tuple[int, ...]] = []

    def rec(chosen: set, forbidden: set, uncovered: list):
        if not uncovered:
            found.append(tuple(sorted(chosen)))
            if len(found) > cap:
                raise CapacityError(f"more than {cap} minimum transversals")
            return not collect
        budget = k - len(chosen)
        if budget <= 0:
            return False
        # every remaining vertex covers at most max-degree-many uncovered edges
        local = {}
        for e in uncovered:
            for v in e:
                if v not in forbidden:
                    local[v] = local.get(v, 0) + 1
        if not local or math.ceil(len(uncovered) / max(local.values())) > budget:
            return False
        # branch on the uncovered edge with fewest usable vertices
        e = min(uncovered, key=lambda e: (sum(v not in forbidden for v in e), sorted(e)))
        cands = sorted((v for v in e if v not in forbidden), key=lambda v: (-deg[v], v))
        added = []
        for v in cands:
            chosen.add(v)
            rest = [f for f in uncovered if v not in f]
            if rec(chosen, forbidden, rest):
                return True
            chosen.discard(v)
            forbidden.add(v)
            added.append(v)
        forbidden.difference_update(added)
        return False

    rec(set(), set(), edges)
    return found


def transversal_number(h: Hypergraph) -> int:
    if h.n_edges == 0:
        return 0
    k = math.ceil(nu_star(h))
    while not _cover_search(h, k, collect=False):
        k += 1
    return k


def minimal_transversals(h: Hypergraph, cap: int = TRANSVERSAL_CAP) -> list[tuple[int, ...]]:
    """Every transversal of size exactly tau(h), sorted."""
    tau = transversal_number(h)
    if tau == 0:
        return [()]
    return sorted(t for t in _cover_search(h, tau, collect=True, cap=cap) if len(t) == tau)


def is_transversal(h: Hypergraph, S) -> bool:
    S = set(S)
    return all(S.intersection(e) for e in h.edges)


# -- matchings -------------------------------------------------------------

def maximum_matching(h: Hypergraph, avoid=(), at_least: int | None = None) -> list[Edge]:
    """A largest set of pairwise disjoint edges avoiding the vertices ``avoid``.

    If ``at_least`` is given the search stops as soon as a matching of that
    size is found.
    """
    avoid = set(avoid)
    edges = [e for e in h.edges if not avoid.intersection(e)]
    # edges through low-degree vertices first tends to find big matchings early
    deg = h.degrees
    edges.sort(key=lambda e: (sum(deg[v] for v in e), e))
    r = h.r
    best: list[Edge] = []
    used: set = set()
    cur: list[Edge] = []
    target = at_least

    def rec(i, free_vertices):
        nonlocal best
        if len(cur) > len(best):
            best = list(cur)
            if target is not None and len(best) >= target:
                return True
        if i == len(edges):
            return False
        if len(cur) + min(len(edges) - i, free_vertices // r) <= len(best):
            return False
        e = edges[i]
        if not used.intersection(e):
            used.update(e)
            cur.append(e)
            if rec(i + 1, free_vertices - r):
                return True
            cur.pop()
            used.difference_update(e)
        return rec(i + 1, free_vertices)

    free = len({v for e in edges for v in e})
    rec(0, free)
    return best


def matching_number(h: Hypergraph) -> int:
    return len(maximum_matching(h))


def max_matching_avoiding(h: Hypergraph, v: int) -> int:
    """nu of h after deleting every edge through ``v``."""
    h._check_vertex(v)
    return len(maximum_matching(h, avoid=(v,)))


def covering_chain(h: Hypergraph) -> dict:
    """The quantities in  max(nu, |E|/Delta) <= nu* <= min(tau, |V|/r)."""
    d = h.max_degree
    out = {
        "nu": matching_number(h),
        "edges_over_delta": Fraction(h.n_edges, d) if d else Fraction(0),
        "nu_star": nu_star(h),
        "tau": transversal_number(h),
        "vertices_over_r": Fraction(h.n_vertices, h.r),
    }
    out["holds"] = (max(out["nu"], out["edges_over_delta"]) <= out["nu_star"]
                    <= min(out["tau"], out["vertices_over_r"]))
    return out

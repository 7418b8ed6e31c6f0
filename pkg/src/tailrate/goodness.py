"""Good and very good subgraphs, and the check over all critical subgraphs.

A subgraph F is good (relative to an ambient maximum degree ``delta``) when
it has exactly one minimum transversal and that transversal has size
|E(F)|/delta.  Very good adds two covering properties:

VG1: for each vertex v of F outside S there are k disjoint edges avoiding v;
VG2: for each v in S there is a set F' of k+1 edges forming vertex-disjoint
     loose paths, covering S, with v of degree 2 and no other vertex of S of
     degree 2.

Every positive answer carries a witness, and ``GoodnessReport.verify``
re-checks the witnesses from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded
from .fractional import _cover_search, is_transversal, maximum_matching, minimal_transversals, transversal_number
from .hypergraph import Hypergraph, is_independent, loose_path_decomposition
from .labelings import critical_subgraphs, enumerate_stable_labelings, f_star_family

VG2_BUDGET = 10**7


@dataclass
class GoodnessReport:
    subject: Hypergraph
    delta: int
    k: int | None = None
    is_good: bool = False
    transversal: tuple | None = None
    counter_witness: tuple | None = None  # two minimum transversals, or one of size tau > k
    reason: str = ""
    vg1: bool | None = None
    vg1_witness: dict = field(default_factory=dict)  # v -> list of edges, or v -> None on failure
    vg2: bool | None = None
    vg2_witness: dict = field(default_factory=dict)

    @property
    def is_very_good(self) -> bool:
        return bool(self.is_good and self.vg1 and self.vg2)

    def verify(self) -> bool:
        """Independently re-check every positive claim."""
        f, S = self.subject, self.transversal
        if self.is_good:
            if S is None or not is_transversal(f, S) or len(S) * self.delta != f.n_edges:
                return False
        if self.vg1:
            for v, edges in self.vg1_witness.items():
                if edges is None or not _check_vg1_witness(f, S, v, edges):
                    return False
            if set(self.vg1_witness) != set(f.non_isolated) - set(S):
                return False
        if self.vg2:
            for v, edges in self.vg2_witness.items():
                if edges is None or not _check_vg2_witness(f, S, v, edges):
                    return False
            if set(self.vg2_witness) != set(S):
                return False
        return True

    def to_json(self) -> dict:
        def edges_json(x):
            return None if x is None else [list(e) for e in x]

        return {
            "edges": [list(e) for e in self.subject.edges],
            "delta": self.delta,
            "k": self.k,
            "is_good": self.is_good,
            "transversal": None if self.transversal is None else list(self.transversal),
            "counter_witness": None if self.counter_witness is None
            else [list(t) for t in self.counter_witness],
            "reason": self.reason,
            "vg1": self.vg1,
            "vg1_witness": {str(v): edges_json(x) for v, x in sorted(self.vg1_witness.items())},
            "vg2": self.vg2,
            "vg2_witness": {str(v): edges_json(x) for v, x in sorted(self.vg2_witness.items())},
            "is_very_good": self.is_very_good,
        }


def _check_vg1_witness(f, S, v, edges) -> bool:
    k = len(S)
    if len(edges) != k or any(e not in f.edge_set or v in e for e in edges):
        return False
    used = [u for e in edges for u in e]
    return len(used) == len(set(used))


def _check_vg2_witness(f, S, v, edges) -> bool:
    k = len(S)
    if len(edges) != k + 1 or len(set(edges)) != k + 1 or any(e not in f.edge_set for e in edges):
        return False
    sub = f.subgraph(edges)
    if loose_path_decomposition(sub) is None:
        return False
    deg = sub.degrees
    if any(deg[s] == 0 for s in S) or deg[v] != 2:
        return False
    return all(deg[w] != 2 for w in S if w != v)


def check_good(f: Hypergraph, delta: int | None = None) -> GoodnessReport:
    """Decide goodness of ``f`` with respect to maximum degree ``delta`` (default: Delta(f))."""
    delta = f.max_degree if delta is None else delta
    rep = GoodnessReport(f, delta)
    if delta <= 0:
        rep.is_good = f.n_edges == 0
        rep.k = 0
        rep.transversal = ()
        return rep
    if f.n_edges % delta:
        rep.reason = f"|E| = {f.n_edges} is not divisible by {delta}"
        return rep
    k = f.n_edges // delta
    rep.k = k
    tau = transversal_number(f)
    if tau != k:
        rep.reason = f"tau = {tau} differs from |E|/delta = {k}"
        rep.counter_witness = tuple(_cover_search(f, tau, collect=False)) if tau > k else None
        return rep
    mins = minimal_transversals(f)
    if len(mins) != 1:
        rep.reason = f"{len(mins)} minimum transversals"
        rep.counter_witness = (mins[0], mins[1])
        return rep
    (S,) = mins
    # a transversal of size |E|/delta hits each edge once and uses only degree-delta vertices
    if not is_independent(f, S) or any(f.degrees[s] != delta for s in S):
        raise AssertionError(f"unique minimum transversal {S} of {f} is not independent of full degree")
    rep.is_good = True
    rep.transversal = S
    return rep


def check_vg1(f: Hypergraph, S) -> tuple[bool, dict]:
    """For each non-isolated v outside S, k disjoint edges avoiding v (or None)."""
    k = len(S)
    witnesses = {}
    ok = True
    for v in f.non_isolated:
        if v in S:
            continue
        m = maximum_matching(f, avoid=(v,), at_least=k)
        if len(m) >= k:
            witnesses[v] = sorted(m[:k])
        else:
            witnesses[v] = None
            ok = False
    return ok, witnesses


def _vg2_search(f: Hypergraph, S, v, budget: int):
    """Edge sets F' for VG2 at ``v``, or None.

    S is an independent transversal, so each edge of F meets S exactly once.
    F' therefore consists of two edges at v and one edge at each other
    vertex of S; we pick them in that order, keeping every vertex degree at
    most 2, pairwise intersections at most one vertex, and no edge with more
    than two degree-2 vertices.
    """
    others = [s for s in S if s != v]
    at = {s: [f.edges[i] for i in f.incidence[s]] for s in S}
    deg: dict = {}
    chosen: list = []
    count = 0

    def fits(e) -> bool:
        if any(deg.get(u, 0) >= 2 for u in e):
            return False
        for g in chosen:
            if len(set(e).intersection(g)) > 1:
                return False
        # after adding e, neither e nor any chosen edge may hold three joints
        joints_e = sum(1 for u in e if deg.get(u, 0) >= 1)
        if joints_e > 2:
            return False
        for g in chosen:
            shared = set(e).intersection(g)
            if shared and sum(1 for u in g if deg.get(u, 0) >= 2) + 1 > 2:
                return False
        # no vertex of S other than v may become a joint
        return not any(u in S_set and u != v and deg.get(u, 0) >= 1 for u in e)

    def push(e):
        chosen.append(e)
        for u in e:
            deg[u] = deg.get(u, 0) + 1

    def pop():
        e = chosen.pop()
        for u in e:
            deg[u] -= 1

    S_set = set(S)

    def rec(i):
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetExceeded(f"VG2 search exceeded {budget} nodes")
        if i == len(others):
            if loose_path_decomposition(f.subgraph(chosen)) is not None:
                return list(chosen)
            return None
        for e in at[others[i]]:
            if fits(e):
                push(e)
                got = rec(i + 1)
                if got is not None:
                    return got
                pop()
        return None

    for a, b in combinations(at[v], 2):
        if set(a).intersection(b) != {v}:
            continue
        push(a)
        push(b)
        got = rec(0)
        if got is not None:
            return sorted(got)
        pop()
        pop()
    return None


def check_vg2(f: Hypergraph, S, budget: int = VG2_BUDGET) -> tuple[bool, dict]:
    witnesses = {}
    ok = True
    for v in S:
        w = _vg2_search(f, tuple(S), v, budget)
        witnesses[v] = w
        if w is None:
            ok = False
    return ok, witnesses


def check_very_good(f: Hypergraph, delta: int | None = None, budget: int = VG2_BUDGET) -> GoodnessReport:
    rep = check_good(f, delta)
    if rep.is_good:
        rep.vg1, rep.vg1_witness = check_vg1(f, rep.transversal)
        rep.vg2, rep.vg2_witness = check_vg2(f, rep.transversal, budget)
    return rep


@dataclass
class AssumptionReport:
    subject: Hypergraph
    holds: bool
    reports: list  # GoodnessReport per critical subgraph
    all_good: bool
    crit_equals_star: bool | None  # checked only when every critical subgraph is good
    transversals_disjoint: bool | None  # checked when additionally tau(H) = |E|/Delta

    @property
    def counter_witnesses(self) -> list:
        return [rep.subject for rep in self.reports if not rep.is_very_good]

    def to_json(self) -> dict:
        return {
            "assumption": self.holds,
            "n_critical": len(self.reports),
            "all_good": self.all_good,
            "crit_equals_star": self.crit_equals_star,
            "transversals_disjoint": self.transversals_disjoint,
            "counter_witnesses": [[list(e) for e in f.edges] for f in self.counter_witnesses],
            "reports": [rep.to_json() for rep in self.reports],
        }


def check_assumption(h: Hypergraph, budget: int = VG2_BUDGET) -> AssumptionReport:
    """Is every proper critical subgraph of ``h`` very good?"""
    labelings = enumerate_stable_labelings(h)
    delta = h.max_degree
    crit = critical_subgraphs(h, labelings)
    reports = [check_very_good(f, delta, budget) for f in crit]
    for rep in reports:
        if not rep.verify():
            raise AssertionError(f"goodness witnesses failed to re-verify for {rep.subject}")
    all_good = all(rep.is_good for rep in reports)
    crit_equals_star = None
    disjoint = None
    if all_good:
        star = f_star_family(h)
        crit_equals_star = [f.edges for f in crit] == [f.edges for f in star]
        if delta and Fraction(h.n_edges, delta) == transversal_number(h):
            mins = minimal_transversals(h)
            disjoint = all(not set(a).intersection(b) for a, b in combinations(mins, 2))
    return AssumptionReport(h, all(rep.is_very_good for rep in reports), reports, all_good,
                            crit_equals_star, disjoint)

"""Labelings, stable labelings and the objects derived from them.

A labeling assigns each vertex a value in [0, 1] so that every edge sums to
0 or 1, and vanishes off the maximum-degree vertices.  It is *stable* when
no other labeling has the same edge sums, zero set and level-set partition.
Fixing the partition and the zero set turns the edge sums into a linear
system in one unknown per nonzero level set; the competitors form an affine
slice of it and the side conditions (values distinct, nonzero, at most 1)
are open, so stability is exactly uniqueness of the solution.  The
enumerator below walks over (zero block, partition) pairs and keeps an
incrementally reduced system to prune early.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CapacityError, InputError
from .fractional import frac_str, nu_star
from .hypergraph import Hypergraph, compact, independent_sets, is_independent, star_core, star_of_set

DEFAULT_CAP = 14
ZERO = Fraction(0)
ONE = Fraction(1)


def enumeration_cap() -> int:
    raw = os.environ.get("TAILRATE_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"TAILRATE_CAP must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Labeling:
    owner: Hypergraph
    values: tuple[Fraction, ...]

    def __post_init__(self):
        h = self.owner
        vals = tuple(Fraction(x) for x in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != h.n_vertices:
            raise InputError(f"labeling has {len(vals)} values for {h.n_vertices} vertices")
        if any(x < 0 or x > 1 for x in vals):
            raise InputError("label values must lie in [0, 1]")
        d = h.max_degree
        for v, x in enumerate(vals):
            if x and h.degrees[v] < d:
                raise InputError(f"vertex {v} has degree below the maximum but label {x}")
        for e in h.edges:
            if sum(vals[v] for v in e) not in (ZERO, ONE):
                raise InputError(f"edge {e} sums to {sum(vals[v] for v in e)}, not 0 or 1")

    def edge_sum(self, e) -> Fraction:
        return sum((self.values[v] for v in e), ZERO)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.values) if x)

    @property
    def nonzero_values(self) -> tuple[Fraction, ...]:
        return tuple(sorted(set(x for x in self.values if x)))

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    @property
    def is_single_valued(self) -> bool:
        return len(self.nonzero_values) <= 1

    def to_json(self) -> dict:
        return {str(v): frac_str(x) for v, x in enumerate(self.values)}

    @classmethod
    def from_json(cls, owner: Hypergraph, data: dict) -> "Labeling":
        vals = [ZERO] * owner.n_vertices
        for k, x in data.items():
            v = int(k)
            owner._check_vertex(v)
            vals[v] = Fraction(x)
        return cls(owner, tuple(vals))


@dataclass(frozen=True)
class LabelingSet:
    owner: Hypergraph
    labelings: tuple[Labeling, ...]

    def __len__(self):
        return len(self.labelings)

    def __iter__(self):
        return iter(self.labelings)

    def nonzero(self) -> list[Labeling]:
        return [lam for lam in self.labelings if not lam.is_zero]

    def by_value_type(self) -> Counter:
        """Multiplicity of each sorted tuple of nonzero values."""
        return Counter(lam.nonzero_values for lam in self.nonzero())


# -- exact linear algebra on small systems ---------------------------------

class _Reduced:
    """Equations sum_b a_b x_b = c kept in reduced row echelon form.

    ``rows`` maps pivot variable -> (coefficients dict without the pivot, rhs).
    Instances are copied on branch, never mutated by callers.
    """

    __slots__ = ("rows",)

    def __init__(self, rows=None):
        self.rows = {} if rows is None else rows

    def add(self, coeffs: dict, rhs: Fraction):
        """Return the extended system, or None if inconsistent."""
        coeffs = dict(coeffs)
        for p, (prow, prhs) in self.rows.items():
            a = coeffs.pop(p, None)
            if a:
                for var, b in prow.items():
                    coeffs[var] = coeffs.get(var, ZERO) - a * b
                rhs -= a * prhs
        coeffs = {k: v for k, v in coeffs.items() if v}
        if not coeffs:
            return self if rhs == 0 else None
        piv = min(coeffs)
        a = coeffs.pop(piv)
        new_row = ({k: v / a for k, v in coeffs.items()}, rhs / a)
        rows = {}
        for p, (prow, prhs) in self.rows.items():
            b = prow.get(piv)
            if b:
                prow = dict(prow)
                del prow[piv]
                for var, c in new_row[0].items():
                    prow[var] = prow.get(var, ZERO) - b * c
                prow = {k: v for k, v in prow.items() if v}
                prhs = prhs - b * new_row[1]
            rows[p] = (prow, prhs)
        rows[piv] = new_row
        return _Reduced(rows)

    def determined(self) -> dict:
        return {p: rhs for p, (row, rhs) in self.rows.items() if not row}


def _admissible(values: dict) -> bool:
    vals = list(values.values())
    return all(0 < x <= 1 for x in vals) and len(set(vals)) == len(vals)


def stable_labelings_search(h: Hypergraph):
    """Yield value vectors of all stable labelings (pruned search)."""
    n = h.n_vertices
    order = list(h.max_degree_vertices) if h.n_edges else list(range(n))
    pos = {v: i for i, v in enumerate(order)}
    # edges become fully assigned once their last max-degree vertex is placed
    completes_at = [[] for _ in range(len(order))]
    for e in h.edges:
        idx = [pos[v] for v in e if v in pos]
        if idx:
            completes_at[max(idx)].append(e)

    block = [0] * n  # 0 = zero block, b >= 1 = nonzero block b

    def rec(i, n_blocks, system):
        if i == len(order):
            if len(system.rows) != n_blocks:
                return
            det = system.determined()
            if len(det) != n_blocks or not _admissible(det):
                return
            yield tuple(det[block[v]] if block[v] else ZERO for v in range(n))
            return
        v = order[i]
        for b in range(n_blocks + 2):
            block[v] = b
            sys2 = system
            ok = True
            for e in completes_at[i]:
                coeffs = Counter(block[u] for u in e if block[u])
                if not coeffs:
                    continue
                sys2 = sys2.add({k: Fraction(c) for k, c in coeffs.items()}, ONE)
                if sys2 is None:
                    ok = False
                    break
            if ok and _admissible(sys2.determined()):
                yield from rec(i + 1, max(n_blocks, b), sys2)
        block[v] = 0

    yield from rec(0, 0, _Reduced())


def enumerate_stable_labelings(h: Hypergraph, cap: int | None = None) -> LabelingSet:
    """L_H: every stable labeling of ``h``, the zero labeling included."""
    cap = enumeration_cap() if cap is None else cap
    n_star = len(h.max_degree_vertices) if h.n_edges else h.n_vertices
    if n_star > cap:
        raise CapacityError(f"{n_star} maximum-degree vertices exceeds the enumeration cap {cap}")
    found = sorted(set(stable_labelings_search(h)))
    return LabelingSet(h, tuple(Labeling(h, vals) for vals in found))


def level_partition(lam: Labeling) -> tuple[list[int], list[list[int]]]:
    """(zero set, nonzero level sets ordered by value)."""
    groups: dict = {}
    for v, x in enumerate(lam.values):
        groups.setdefault(x, []).append(v)
    zero = groups.pop(ZERO, [])
    return zero, [groups[x] for x in sorted(groups)]


def solution_rank(lam: Labeling) -> tuple[int, int]:
    """(rank of the edge-sum system on the level-set unknowns, number of unknowns)."""
    h = lam.owner
    _, blocks = level_partition(lam)
    which = {v: i for i, blk in enumerate(blocks) for v in blk}
    system = _Reduced()
    for e in h.edges:
        coeffs = Counter(which[v] for v in e if v in which)
        if coeffs:
            system = system.add({k: Fraction(c) for k, c in coeffs.items()}, lam.edge_sum(e))
            assert system is not None  # lam itself is a solution
    return len(system.rows), len(blocks)


def is_stable(lam: Labeling) -> bool:
    rank, unknowns = solution_rank(lam)
    return rank == unknowns


def is_strict(lam: Labeling) -> bool:
    return all(lam.edge_sum(e) == 1 for e in lam.owner.edges)


def has_strict_stable_labeling(h: Hypergraph, labelings: LabelingSet | None = None) -> bool:
    """Decided by scanning L_H and by nu*(h) * Delta(h) == |E(h)|; the two must agree."""
    by_lp = nu_star(h) * h.max_degree == h.n_edges
    if labelings is None:
        try:
            labelings = enumerate_stable_labelings(h)
        except CapacityError:
            return by_lp
    by_scan = any(is_strict(lam) for lam in labelings)
    if by_scan != by_lp:
        raise AssertionError(f"strict-labeling scan ({by_scan}) disagrees with LP test ({by_lp}) on {h}")
    return by_scan


def support_edges(lam: Labeling) -> Hypergraph:
    """Spanning subgraph of the owner on the edges summing to 1."""
    h = lam.owner
    return h.subgraph(e for e in h.edges if lam.edge_sum(e) == 1)


def supporting_subgraph(lam: Labeling) -> Hypergraph:
    """F_lambda with isolated vertices removed (vertices relabelled)."""
    return compact(support_edges(lam))[0]


def restrict_to_support(lam: Labeling) -> Labeling:
    f, keep = compact(support_edges(lam))
    return Labeling(f, tuple(lam.values[v] for v in keep))


# -- T_H -------------------------------------------------------------------

@dataclass(frozen=True)
class TupleSet:
    """Sorted representatives of T_H with the size of each permutation orbit."""

    r: int
    orbits: dict  # sorted tuple of Fractions -> orbit size

    @property
    def nonzero(self) -> dict:
        return {t: k for t, k in self.orbits.items() if any(t)}

    def size(self, nonzero_only=True) -> int:
        return sum((self.nonzero if nonzero_only else self.orbits).values())


def orbit_size(t: Sequence) -> int:
    out = math.factorial(len(t))
    for k in Counter(t).values():
        out //= math.factorial(k)
    return out


def tuple_set(h: Hypergraph, labelings: LabelingSet | None = None) -> TupleSet:
    if labelings is None:
        labelings = enumerate_stable_labelings(h)
    reps = {tuple(sorted(lam.values[v] for v in e)) for lam in labelings for e in h.edges}
    return TupleSet(h.r, {t: orbit_size(t) for t in sorted(reps)})


# -- critical subgraphs and F_S families -----------------------------------

def is_critical(f: Hypergraph, delta: int) -> bool:
    """nu*(f) == |E(f)| / delta with at least one edge."""
    return f.n_edges > 0 and nu_star(f) * delta == f.n_edges


def critical_subgraphs(h: Hypergraph, labelings: LabelingSet | None = None) -> list[Hypergraph]:
    """F_crit: proper nonempty critical subgraphs, as spanning subgraphs of ``h``.

    Only supporting subgraphs of stable labelings can be critical, so those
    are the candidates; each is then confirmed by the LP.
    """
    if labelings is None:
        labelings = enumerate_stable_labelings(h)
    cands = {support_edges(lam) for lam in labelings.nonzero()}
    delta = h.max_degree
    return sorted((f for f in cands if f.n_edges < h.n_edges and is_critical(f, delta)),
                  key=lambda f: f.edges)


def star_independent_sets(h: Hypergraph) -> list[tuple[int, ...]]:
    """I_{H*} in the original vertex ids."""
    hs, keep = star_core(h)
    return [tuple(keep[i] for i in S) for S in independent_sets(hs)]


def _star_family_sets(h: Hypergraph) -> list[tuple[int, ...]]:
    # for r >= 3 an edge may hold two max-degree vertices plus a lower-degree
    # one; such S are independent in H* but F_S then has fewer than |S|*Delta
    # edges, so only sets independent in H itself are used here
    return [S for S in star_independent_sets(h) if is_independent(h, S)]


def f_star_family(h: Hypergraph) -> list[Hypergraph]:
    """{F_S : S in I_{H*}} minus H, empty S omitted."""
    out = {star_of_set(h, S) for S in _star_family_sets(h) if S}
    out.discard(h)
    return sorted(out, key=lambda f: f.edges)


def spanning_independent_sets(h: Hypergraph) -> list[tuple[int, ...]]:
    """I_span: the S in I_{H*} with F_S = H."""
    return [S for S in _star_family_sets(h) if star_of_set(h, S) == h]

"""r-uniform hypergraphs, the generators used throughout, and structural queries.

Vertices are the integers ``0..n_vertices-1``.  Edges are stored as sorted
tuples and the edge list is kept in lexicographic order, so two values built
from the same edge set compare equal field by field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .errors import InputError

Edge = tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    r: int
    n_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 2:
            raise InputError(f"uniformity must be an integer >= 2, got {self.r!r}")
        if not isinstance(self.n_vertices, int) or self.n_vertices < 0:
            raise InputError(f"vertex count must be a nonnegative integer, got {self.n_vertices!r}")
        canon = []
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.r or len(set(e)) != self.r:
                raise InputError(f"edge {e} is not a set of {self.r} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n_vertices:
                raise InputError(f"edge {e} has a vertex outside 0..{self.n_vertices - 1}")
            canon.append(e)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InputError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    # -- basic queries -----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """``incidence[v]`` lists the indices of the edges containing ``v``."""
        inc = [[] for _ in range(self.n_vertices)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.degrees[v]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def is_regular(self) -> bool:
        """Every vertex has degree equal to the maximum degree."""
        return len(set(self.degrees)) <= 1

    @cached_property
    def max_degree_vertices(self) -> tuple[int, ...]:
        d = self.max_degree
        return tuple(v for v, k in enumerate(self.degrees) if k == d)

    @cached_property
    def non_isolated(self) -> tuple[int, ...]:
        return tuple(v for v, k in enumerate(self.degrees) if k > 0)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def subgraph(self, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        """Spanning subgraph on the same vertex set with the given edges."""
        sub = Hypergraph(self.r, self.n_vertices, tuple(tuple(e) for e in edges))
        missing = sub.edge_set - self.edge_set
        if missing:
            raise InputError(f"edges {sorted(missing)} are not edges of the host graph")
        return sub

    def _check_vertex(self, v):
        if not (0 <= v < self.n_vertices):
            raise InputError(f"vertex {v} out of range 0..{self.n_vertices - 1}")

    def _check_vertices(self, vs):
        for v in vs:
            self._check_vertex(v)

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {"r": self.r, "vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Hypergraph":
        try:
            r, n, edges = data["r"], data["vertices"], data["edges"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"graph JSON needs keys r, vertices, edges: {exc}") from None
        if not isinstance(edges, list):
            raise InputError("graph JSON 'edges' must be a list")
        return cls(r, n, tuple(tuple(e) for e in edges))

    def __str__(self):
        return f"Hypergraph(r={self.r}, n={self.n_vertices}, m={self.n_edges})"


def load_graph(path) -> Hypergraph:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return Hypergraph.from_json(data)


def dump_graph(h: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(h.to_json(), fh)


# -- degree helpers (functional spelling) ---------------------------------

def degree(h: Hypergraph, v: int) -> int:
    return h.degree(v)


def max_degree(h: Hypergraph) -> int:
    return h.max_degree


# -- generators ------------------------------------------------------------

def from_edges(r: int, n: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    return Hypergraph(r, n, tuple(tuple(e) for e in edges))


def edgeless(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, ())


def complete_r_partite(r: int, parts: Sequence[int]) -> Hypergraph:
    """K^{(r)}_{m_1,...,m_r}; part ``i`` occupies a contiguous block of ids."""
    parts = list(parts)
    if len(parts) != r:
        raise InputError(f"need exactly r={r} part sizes, got {len(parts)}")
    if any((not isinstance(m, int)) or m < 1 for m in parts):
        raise InputError(f"part sizes must be positive integers, got {parts}")
    blocks, start = [], 0
    for m in parts:
        blocks.append(range(start, start + m))
        start += m
    return Hypergraph(r, start, tuple(product(*blocks)))


def tight_cycle(r: int, length: int) -> Hypergraph:
    """C_l^{(r)}: vertices mod ``length``, edges all cyclic intervals of ``r`` vertices."""
    if not isinstance(length, int) or length <= r:
        raise InputError(f"tight cycle needs length > r={r}, got {length}")
    edges = {tuple(sorted((v + i) % length for i in range(r))) for v in range(length)}
    return Hypergraph(r, length, tuple(edges))


def clique(r: int, k: int) -> Hypergraph:
    if k < r:
        raise InputError(f"clique K_{k}^({r}) needs k >= r")
    return Hypergraph(r, k, tuple(combinations(range(k), r)))


def loose_path(r: int, length: int) -> Hypergraph:
    """P_l^{(r)}: consecutive edges share exactly one vertex."""
    if length < 1:
        raise InputError("loose path needs at least one edge")
    edges = [tuple(range(i * (r - 1), i * (r - 1) + r)) for i in range(length)]
    return Hypergraph(r, length * (r - 1) + 1, tuple(edges))


FANO_LINES: tuple[Edge, ...] = ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (0, 4, 5), (1, 5, 6), (0, 2, 6))


def fano() -> Hypergraph:
    return Hypergraph(3, 7, FANO_LINES)


def fano_minus_edge() -> Hypergraph:
    # all lines are equivalent under collineations; drop {6, 0, 2}
    return Hypergraph(3, 7, FANO_LINES[:-1])


# -- induced structures ----------------------------------------------------

def induced(h: Hypergraph, vertices: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """H[U], relabelled onto ``0..|U|-1``.

    Returns the graph and the map ``new id -> original id``.
    """
    keep = tuple(sorted(set(vertices)))
    h._check_vertices(keep)
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple(tuple(index[v] for v in e) for e in h.edges if all(v in index for v in e))
    return Hypergraph(h.r, len(keep), edges), keep


def star_core(h: Hypergraph) -> tuple[Hypergraph, tuple[int, ...]]:
    """H* = H[V*(H)], the induced subgraph on the vertices of maximum degree."""
    return induced(h, h.max_degree_vertices)


def neighborhood(h: Hypergraph, S: Iterable[int]) -> tuple[int, ...]:
    """N_H(S): vertices sharing an edge with some other vertex of S."""
    S = set(S)
    h._check_vertices(S)
    out = set()
    for e in h.edges:
        hit = S.intersection(e)
        if not hit:
            continue
        for v in e:
            if len(hit) > 1 or v not in hit:
                out.add(v)
    return tuple(sorted(out))


def star_of_set(h: Hypergraph, S: Iterable[int]) -> Hypergraph:
    """F_S: the edges of H meeting S.

    Kept as a spanning subgraph (same vertex ids as ``h``); its non-isolated
    vertices are S together with N_H(S).
    """
    S = set(S)
    h._check_vertices(S)
    return h.subgraph(e for e in h.edges if S.intersection(e))


# -- independent sets ------------------------------------------------------

def independent_sets(h: Hypergraph) -> Iterator[tuple[int, ...]]:
    """All S with |e & S| <= 1 for every edge, the empty set included.

    Backtracking in vertex-id order; choosing a vertex blocks its neighbours.
    """
    n = h.n_vertices
    nbrs = [set() for _ in range(n)]
    for e in h.edges:
        for u in e:
            nbrs[u].update(e)
    for u in range(n):
        nbrs[u].discard(u)

    chosen: list[int] = []
    blocked = [0] * n

    def rec(start):
        yield tuple(chosen)
        for v in range(start, n):
            if blocked[v]:
                continue
            chosen.append(v)
            for w in nbrs[v]:
                blocked[w] += 1
            yield from rec(v + 1)
            for w in nbrs[v]:
                blocked[w] -= 1
            chosen.pop()

    yield from rec(0)


def is_independent(h: Hypergraph, S: Iterable[int]) -> bool:
    S = set(S)
    return all(len(S.intersection(e)) <= 1 for e in h.edges)


def independence_polynomial(h: Hypergraph) -> list[int]:
    """Coefficients ``c[k]`` = number of independent sets of size ``k``."""
    coeffs = [0] * (h.n_vertices + 1)
    for S in independent_sets(h):
        coeffs[len(S)] += 1
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def eval_poly(coeffs: Sequence, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# -- loose paths -----------------------------------------------------------

@dataclass(frozen=True)
class LoosePath:
    edges: tuple[Edge, ...]
    joints: tuple[int, ...]  # w_1..w_{l-1}, the degree-2 vertices in path order

    @property
    def length(self) -> int:
        return len(self.edges)


def loose_path_decomposition(h: Hypergraph) -> list[LoosePath] | None:
    """Split ``h`` (isolated vertices ignored) into vertex-disjoint loose paths.

    Returns ``None`` when ``h`` is not such a union.
    """
    if any(d > 2 for d in h.degrees):
        return None
    m = h.n_edges
    adj: list[list[int]] = [[] for _ in range(m)]
    for v in h.non_isolated:
        inc = h.incidence[v]
        if len(inc) == 2:
            i, j = inc
            if j in adj[i]:  # two shared vertices: not linear
                return None
            adj[i].append(j)
            adj[j].append(i)

    seen = [False] * m
    paths = []
    for start in range(m):
        if seen[start]:
            continue
        # collect the component
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in adj[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        n_links = sum(len(adj[i]) for i in comp) // 2
        if n_links != len(comp) - 1 or any(len(adj[i]) > 2 for i in comp):
            return None
        end = next(i for i in comp if len(adj[i]) <= 1)
        order, prev = [end], None
        while len(order) < len(comp):
            cur = order[-1]
            nxt = next(j for j in adj[cur] if j != prev)
            prev = cur
            order.append(nxt)
        joints = []
        for a, b in zip(order, order[1:]):
            (w,) = set(h.edges[a]).intersection(h.edges[b])
            joints.append(w)
        paths.append(LoosePath(tuple(h.edges[i] for i in order), tuple(joints)))
    return paths


def compact(h: Hypergraph) -> tuple[Hypergraph, tuple[int, ...]]:
    """Drop isolated vertices; returns the relabelled graph and ``new -> old`` map."""
    keep = h.non_isolated
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple(tuple(index[v] for v in e) for e in h.edges)
    return Hypergraph(h.r, len(keep), edges), keep

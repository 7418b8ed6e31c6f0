"""Weighted r-graphs on [n] and the binomial random r-graph sampler."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from ..errors import InputError


@lru_cache(maxsize=32)
def rsets(n: int, r: int) -> np.ndarray:
    """All r-subsets of range(n) in lexicographic order, shape (C(n, r), r)."""
    if n < r:
        return np.zeros((0, r), dtype=np.int64)
    out = np.fromiter((v for c in combinations(range(n), r) for v in c), dtype=np.int64,
                      count=math.comb(n, r) * r)
    out = out.reshape(-1, r)
    out.flags.writeable = False
    return out


def rset_index(n: int, e) -> int:
    """Lexicographic rank of the sorted r-set ``e`` among r-subsets of range(n)."""
    r = len(e)
    rank, prev = 0, -1
    for i, v in enumerate(e):
        for u in range(prev + 1, v):
            rank += math.comb(n - 1 - u, r - 1 - i)
        prev = v
    return rank


@dataclass
class WeightedRGraph:
    """q: r-subsets of [n] -> [0, 1], stored as a default plus sparse overrides."""

    n: int
    r: int
    default_q: float
    overrides: dict = field(default_factory=dict)  # sorted r-tuple -> q

    def __post_init__(self):
        if self.r < 1 or self.n < 0:
            raise InputError(f"bad weighted graph shape n={self.n}, r={self.r}")
        if not 0.0 <= self.default_q <= 1.0:
            raise InputError(f"default weight {self.default_q} outside [0, 1]")
        clean = {}
        for e, q in self.overrides.items():
            key = tuple(sorted(int(v) for v in e))
            if len(key) != self.r or len(set(key)) != self.r or key[0] < 0 or key[-1] >= self.n:
                raise InputError(f"override {e} is not an r-subset of [n]")
            q = float(q)
            if not 0.0 <= q <= 1.0:
                raise InputError(f"weight {q} on {key} outside [0, 1]")
            if q != self.default_q:
                clean[key] = q
        self.overrides = clean

    def q(self, e) -> float:
        return self.overrides.get(tuple(sorted(e)), self.default_q)

    def vector(self) -> np.ndarray:
        """Weights of all r-sets in lexicographic order."""
        vec = np.full(math.comb(self.n, self.r), self.default_q, dtype=float)
        for e, q in self.overrides.items():
            vec[rset_index(self.n, e)] = q
        return vec

    @classmethod
    def from_vector(cls, n: int, r: int, vec, default_q: float) -> "WeightedRGraph":
        vec = np.asarray(vec, dtype=float)
        sets = rsets(n, r)
        idx = np.flatnonzero(vec != default_q)
        return cls(n, r, default_q, {tuple(int(v) for v in sets[i]): float(vec[i]) for i in idx})

    def kernel(self) -> np.ndarray:
        """Symmetric tensor G of shape (n,)*r, zero on tuples with a repeat."""
        return kernel_from_vector(self.n, self.r, self.vector())

    def n_edges(self) -> float:
        return float(self.vector().sum())

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "default_q": self.default_q,
                "overrides": [[list(e), q] for e, q in sorted(self.overrides.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightedRGraph":
        try:
            over = {tuple(e): q for e, q in data.get("overrides", [])}
            return cls(int(data["n"]), int(data["r"]), float(data["default_q"]), over)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed weighted graph: {exc}") from None


def kernel_from_vector(n: int, r: int, vec) -> np.ndarray:
    K = np.zeros((n,) * r, dtype=float)
    sets = rsets(n, r)
    if len(sets):
        for perm in permutations(range(r)):
            K[tuple(sets[:, perm].T)] = vec
    return K


def load_weighted(path) -> WeightedRGraph:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read weighted graph {path}: {exc}") from None
    return WeightedRGraph.from_json(data)


def dump_weighted(Q: WeightedRGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(Q.to_json(), fh)


def constant(n: int, r: int, q: float) -> WeightedRGraph:
    return WeightedRGraph(n, r, q)


def sample_gnp(n: int, p: float, r: int, seed: int) -> WeightedRGraph:
    """Binomial random r-graph as a 0/1 weighted graph.

    Philox is counter based: r-set number i (lexicographic) always receives
    the i-th uniform of the stream keyed by ``seed``.
    """
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p = {p} outside [0, 1]")
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    u = gen.random(math.comb(n, r)) if n >= r else np.zeros(0)
    present = u < p
    sets = rsets(n, r)
    return WeightedRGraph(n, r, 0.0, {tuple(int(v) for v in sets[i]): 1.0
                                      for i in np.flatnonzero(present)})

"""Planted constructions and a numeric upper bound for the mean-field problem.

Phi_H(n, p, delta) = min I_p(Q) over weighted r-graphs Q on [n] with
t(H, Q) >= (1 + delta) p^{|E(H)|}.  Any feasible Q gives an upper bound.
Two planted families give explicit feasible points: a clique (all r-sets
inside an m-set get weight 1) and hubs (all r-sets meeting an s-set get
weight 1).  The solver starts from the cheaper of the two and improves it by
projected gradient on an augmented Lagrangian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import BudgetExceeded, InputError
from ..hypergraph import Hypergraph
from .contraction import gradient_kernel, make_plan, t_density, t_density_kernel
from .entropy import entropy_Ip, i_p, i_p_prime
from .weighted import WeightedRGraph, kernel_from_vector, rsets

NMF_BUDGET = 400
FEAS_SLACK = 1e-12
UPPER = 1.0 - 1e-9


@dataclass
class Planted:
    kind: str  # clique | hubs | constant
    size: int
    Q: WeightedRGraph
    cost: float


def _planted_vector(n, r, p, mask) -> np.ndarray:
    vec = np.full(len(mask), p)
    vec[mask] = 1.0
    return vec


def plant_clique(n: int, p: float, m: int, vertex_set=None, r: int = 2) -> Planted:
    """q = 1 on r-sets inside the clique, p elsewhere."""
    vs = list(range(m)) if vertex_set is None else sorted(set(vertex_set))
    if len(vs) != m or m > n or (vs and (vs[0] < 0 or vs[-1] >= n)):
        raise InputError(f"clique vertex set must be {m} distinct vertices of [n]")
    inside = np.zeros(n, dtype=bool)
    inside[vs] = True
    mask = inside[rsets(n, r)].all(axis=1)
    Q = WeightedRGraph.from_vector(n, r, _planted_vector(n, r, p, mask), p)
    return Planted("clique", m, Q, entropy_Ip(Q, p))


def plant_hubs(n: int, p: float, hub_set, r: int = 2) -> Planted:
    """q = 1 on r-sets meeting the hub set, p elsewhere."""
    hubs = sorted(set(hub_set))
    if hubs and (hubs[0] < 0 or hubs[-1] >= n):
        raise InputError("hub vertices must lie in [n]")
    hub = np.zeros(n, dtype=bool)
    hub[hubs] = True
    mask = hub[rsets(n, r)].any(axis=1)
    Q = WeightedRGraph.from_vector(n, r, _planted_vector(n, r, p, mask), p)
    return Planted("hubs", len(hubs), Q, entropy_Ip(Q, p))


def clique_cost(n: int, p: float, m: int, r: int) -> float:
    return math.comb(m, r) * float(i_p(1.0, p))


def hub_cost(n: int, p: float, s: int, r: int) -> float:
    return (math.comb(n, r) - math.comb(n - s, r)) * float(i_p(1.0, p))


def _smallest_feasible(check, lo, hi):
    """Least k in [lo, hi] with check(k), for monotone check; None if none."""
    if not check(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if check(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def target_density(h: Hypergraph, p: float, delta: float) -> float:
    return (1.0 + delta) * p ** h.n_edges


def sweep_planted(h: Hypergraph, n: int, p: float, delta: float) -> dict:
    """Cheapest feasible clique and hub constructions (None where infeasible)."""
    r = h.r
    plan = make_plan(h)
    target = target_density(h, p, delta)

    def feasible(pl: Planted) -> bool:
        return t_density_kernel(h, pl.Q.kernel(), plan) >= target - FEAS_SLACK

    out = {}
    m = _smallest_feasible(lambda m: feasible(plant_clique(n, p, m, r=r)), r, n)
    out["clique"] = None if m is None else plant_clique(n, p, m, r=r)
    s = _smallest_feasible(lambda s: feasible(plant_hubs(n, p, range(s), r=r)), 1, n)
    out["hubs"] = None if s is None else plant_hubs(n, p, range(s), r=r)
    return out


@dataclass
class NMFResult:
    Q: WeightedRGraph
    value: float
    density: float
    target: float
    start: Planted
    gradient_evals: int
    improved: bool  # strictly below the planted start

    def to_json(self) -> dict:
        return {"value": self.value, "density": self.density, "target": self.target,
                "start": {"kind": self.start.kind, "size": self.start.size, "cost": self.start.cost},
                "gradient_evals": self.gradient_evals, "improved": self.improved,
                "Q": self.Q.to_json()}


def nmf_upper_bound(h: Hypergraph, n: int, p: float, delta: float,
                    budget: int = NMF_BUDGET) -> NMFResult:
    """A feasible weighted graph and its entropy, an upper bound on Phi_H(n, p, delta)."""
    if not 0 < p < 1:
        raise InputError(f"p = {p} must lie strictly between 0 and 1")
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    if n < h.r:
        raise InputError(f"n = {n} is smaller than the uniformity {h.r}")
    r = h.r
    target = target_density(h, p, delta)
    plan = make_plan(h)
    const = WeightedRGraph(n, r, p)
    if delta == 0:
        # the constant graph is the reference point: zero cost by definition
        pl = Planted("constant", 0, const, 0.0)
        return NMFResult(const, 0.0, t_density(h, const), target, pl, 0, False)

    swept = [pl for pl in sweep_planted(h, n, p, delta).values() if pl is not None]
    if not swept:
        full = plant_clique(n, p, n, r=r)
        raise BudgetExceeded(f"no planted construction on {n} vertices reaches the target",
                             best=full.Q)
    start = min(swept, key=lambda pl: pl.cost)
    q_start = start.Q.vector()
    sets = rsets(n, r)

    def density(vec):
        return t_density_kernel(h, kernel_from_vector(n, r, vec), plan)

    def cost(vec):
        return float(np.sum(i_p(vec, p)))

    scale = max(start.cost, 1e-300)
    log_target = math.log(target)
    x = np.clip(q_start, p, UPPER)
    mu, rho = 1.0, 10.0
    evals = 0
    prev = math.inf

    def lagrangian(vec):
        t = density(vec)
        c = math.log(t) - log_target if t > 0 else -math.inf
        viol = max(0.0, mu / rho - c)
        return cost(vec) / scale + 0.5 * rho * viol * viol, t, c

    while evals < budget:
        # inner projected-gradient steps
        for _ in range(25):
            if evals >= budget:
                break
            L, t, c = lagrangian(x)
            K = kernel_from_vector(n, r, x)
            g_t = gradient_kernel(h, K)
            evals += 1
            viol = max(0.0, mu / rho - c)
            grad = i_p_prime(x, p) / scale - rho * viol * g_t / t
            # entropy curvature is 1/(q(1-q)); scale the step by its inverse
            direction = grad * (x * (1.0 - x)) * scale
            step = 1.0
            accepted = False
            for _ in range(40):
                y = np.clip(x - step * direction, p, UPPER)
                L_new = lagrangian(y)[0]
                if L_new <= L - 1e-4 * float(grad @ (x - y)):
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            x = y
        _, t, c = lagrangian(x)
        mu = max(0.0, mu - rho * c)
        if c < 0:
            rho = min(rho * 2.0, 1e8)
        now = cost(x)
        if c > -1e-12 and abs(prev - now) <= 1e-12 * now:
            break
        prev = now

    # repair toward the (exactly feasible) planted start; keep whichever is cheaper
    def feasible(vec):
        return density(vec) >= target - FEAS_SLACK

    if not feasible(x):
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if feasible((1 - mid) * x + mid * q_start):
                hi = mid
            else:
                lo = mid
        x = (1 - hi) * x + hi * q_start
    best = q_start
    if feasible(x) and cost(x) < start.cost:
        best = x
    Q = WeightedRGraph.from_vector(n, r, best, p)
    value = entropy_Ip(Q, p)
    return NMFResult(Q, value, density(best), target, start, evals, value < start.cost)

"""Rate functions: P_H, Vol_H, beta_H and the three rate formulas.

Notation.  L_H is the set of stable labelings, T'_H the nonzero edge-label
tuples, and a compatibility function xi assigns a nonnegative weight to each
nonzero label value (xi(0) = 1).  Then

    P_H(xi)   = sum over L_H of prod_v xi(lambda_v)
    Vol_H(xi) = sum over T'_H (with orbit multiplicity) of prod_i xi(t_i)

and rho_LZ(delta) = inf Vol_H subject to P_H >= 1 + delta.

When every nonzero stable labeling uses a single value, substituting
alpha_v = xi(v)^(1/v) makes Vol linear in alpha and P - 1 a sum of convex
increasing functions h_v(alpha_v), so the minimum sits on a coordinate axis
and reduces to one-dimensional inversions (``minimize_separable``).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InputError
from .fractional import frac_str, nu_star
from .hypergraph import (Hypergraph, clique, complete_r_partite, eval_poly, fano,
                         fano_minus_edge, independence_polynomial, star_core, tight_cycle)
from .labelings import LabelingSet, TupleSet, enumerate_stable_labelings, tuple_set

GENERIC_STARTS = 64
GENERIC_TOL = 1e-8
LOG_FLOOR = -60.0


@dataclass(frozen=True)
class RateResult:
    value: float
    branch: str
    solver: str  # structured | generic | closed_form | formula
    residual: float = 0.0

    def to_json(self) -> dict:
        return {"value": self.value, "branch": self.branch, "solver": self.solver,
                "residual": self.residual}


class CompatibilityAssignment:
    """xi: nonzero label value -> weight, with xi(0) = 1."""

    def __init__(self, weights: Mapping):
        self.weights = {}
        for t, x in weights.items():
            t = Fraction(t)
            x = float(x)
            if not 0 < t <= 1:
                raise InputError(f"compatibility keys must lie in (0, 1], got {t}")
            if not (x >= 0 and math.isfinite(x)):
                raise InputError(f"xi({t}) = {x} must be finite and nonnegative")
            self.weights[t] = x

    def __call__(self, t) -> float:
        t = Fraction(t)
        if t == 0:
            return 1.0
        try:
            return self.weights[t]
        except KeyError:
            raise InputError(f"compatibility function has no value for {frac_str(t)}") from None

    def __repr__(self):
        inner = ", ".join(f"{frac_str(t)}: {x!r}" for t, x in sorted(self.weights.items()))
        return f"CompatibilityAssignment({{{inner}}})"


# -- symbolic forms -----------------------------------------------------------
# a monomial is a sorted tuple of (value, exponent) pairs; the empty tuple is 1

def _monomial(values) -> tuple:
    c = Counter(x for x in values if x)
    return tuple(sorted(c.items()))


def p_terms(labelings: LabelingSet) -> Counter:
    """P_H as {monomial: coefficient}."""
    return Counter(_monomial(lam.values) for lam in labelings)


def vol_terms(tuples: TupleSet) -> Counter:
    """Vol_H as {monomial: coefficient}, orbit sizes as coefficients."""
    out: Counter = Counter()
    for t, k in tuples.nonzero.items():
        out[_monomial(t)] += k
    return out


def format_terms(terms: Mapping, var: str = "xi") -> str:
    parts = []
    for mono, c in sorted(terms.items()):
        factors = [f"{var}({t})" + (f"^{e}" if e != 1 else "") for t, e in mono]
        body = "*".join(factors)
        if not body:
            parts.append(str(c))
        else:
            parts.append(body if c == 1 else f"{c}*{body}")
    return " + ".join(parts) if parts else "0"


def _eval_terms(terms: Mapping, xi: CompatibilityAssignment) -> float:
    total = 0.0
    for mono, c in terms.items():
        total += c * math.prod(xi(t) ** e for t, e in mono)
    return total


class RateModel:
    """Everything about ``h`` that the rate computations reuse."""

    def __init__(self, h: Hypergraph, labelings: LabelingSet | None = None):
        if h.max_degree < 1:
            raise InputError("rate functions need a graph with at least one edge")
        self.h = h
        self.labelings = enumerate_stable_labelings(h) if labelings is None else labelings
        self.tuples = tuple_set(h, self.labelings)
        self.p_terms = p_terms(self.labelings)
        self.vol_terms = vol_terms(self.tuples)

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        """Distinct nonzero label values, ascending."""
        vals = {t for mono in self.p_terms for t, _ in mono}
        vals |= {t for mono in self.vol_terms for t, _ in mono}
        return tuple(sorted(vals))

    @property
    def single_valued(self) -> bool:
        return all(lam.is_single_valued for lam in self.labelings)

    def p_H(self, xi: CompatibilityAssignment) -> float:
        return _eval_terms(self.p_terms, xi)

    def vol_H(self, xi: CompatibilityAssignment) -> float:
        return _eval_terms(self.vol_terms, xi)

    # structured data: alpha_v = xi(v)^(1/v)
    @cached_property
    def axis_data(self) -> dict:
        """value v -> (c_v, list of exponents v*|supp(lambda)|) for single-valued models."""
        if not self.single_valued:
            raise ValueError("axis data needs single-valued labelings")
        out = {v: [0, []] for v in self.values}
        for t, k in self.tuples.nonzero.items():
            (v,) = set(x for x in t if x)
            out[v][0] += k
        for lam in self.labelings.nonzero():
            v = lam.nonzero_values[0]
            out[v][1].append(v * len(lam.support))
        return {v: (c, sorted(ex)) for v, (c, ex) in out.items()}

    # dense arrays for the generic solver, one column per value
    @cached_property
    def arrays(self):
        idx = {t: i for i, t in enumerate(self.values)}

        def dense(terms, drop_constant):
            rows, coef = [], []
            for mono, c in sorted(terms.items()):
                if drop_constant and not mono:
                    continue
                row = np.zeros(len(idx))
                for t, e in mono:
                    row[idx[t]] = e
                rows.append(row)
                coef.append(float(c))
            return np.array(rows).reshape(-1, len(idx)), np.array(coef)

        return dense(self.p_terms, True), dense(self.vol_terms, False)


def p_H(h: Hypergraph, xi: CompatibilityAssignment, model: RateModel | None = None) -> float:
    return (model or RateModel(h)).p_H(xi)


def vol_H(h: Hypergraph, xi: CompatibilityAssignment, model: RateModel | None = None) -> float:
    return (model or RateModel(h)).vol_H(xi)


# -- one-dimensional tools ---------------------------------------------------

def invert_increasing(fn: Callable[[float], float], target: float) -> float:
    """x >= 0 with fn(x) = target for increasing fn, fn(0) <= target.

    Bracket grows by doubling, then bisection down to adjacent floats; the
    endpoint with the smaller residual is returned.
    """
    if target <= fn(0.0):
        return 0.0
    hi = 1.0
    while fn(hi) < target:
        hi *= 2.0
        if hi > 1e300:
            raise InputError("could not bracket the inverse")
    lo = 0.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo if abs(fn(lo) - target) < abs(fn(hi) - target) else hi


def minimize_separable(costs: Sequence[float], funcs: Sequence[Callable[[float], float]],
                       target: float, labels: Sequence[str] | None = None,
                       check_points: int = 32) -> tuple[float, int]:
    """min_k c_k * h_k^{-1}(target) for convex increasing h_k with h_k(0) = 0.

    For such h_k the minimum of sum c_k x_k over {sum h_k(x_k) >= target}
    is attained on a coordinate axis, so this is the full minimum.  Ties go
    to the smallest label (index order if no labels are given).
    """
    if target < 0:
        raise InputError("target must be nonnegative")
    costs = [float(c) for c in costs]
    if len(costs) != len(funcs) or not costs:
        raise InputError("need one cost per function and at least one of each")
    labels = [f"{i:09d}" for i in range(len(costs))] if labels is None else list(labels)
    grid = np.linspace(0.0, 4.0, check_points)
    for k, fn in enumerate(funcs):
        vals = [fn(float(x)) for x in grid]
        if abs(vals[0]) > 1e-12 or any(b <= a for a, b in zip(vals, vals[1:])):
            raise InputError(f"function {k} is not strictly increasing from 0")
    if target == 0:
        return 0.0, min(range(len(costs)), key=lambda k: labels[k])
    best = None
    for k, (c, fn) in enumerate(zip(costs, funcs)):
        val = c * invert_increasing(fn, target)
        key = (val, labels[k])
        if best is None or key < best[0]:
            best = (key, k)
    return best[0][0], best[1]


# -- beta_H ------------------------------------------------------------------

def star_polynomial(h: Hypergraph) -> list[int]:
    return independence_polynomial(star_core(h)[0])


def beta_H(h: Hypergraph, delta: float, coeffs: Sequence[int] | None = None) -> float:
    """Positive root of i_{H*}(beta) = 1 + delta."""
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return 0.0
    coeffs = star_polynomial(h) if coeffs is None else coeffs
    target = 1.0 + delta
    lo, hi = 0.0, max(1.0, float(delta))  # i(x) >= 1 + x, so the root is <= delta
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if eval_poly(coeffs, mid) < target:
            lo = mid
        else:
            hi = mid
    # pick the closer float endpoint, judged exactly
    exact = Fraction(target)

    def res(x):
        return abs(eval_poly(coeffs, Fraction(x)) - exact)

    return lo if res(lo) <= res(hi) else hi


def beta_residual(h: Hypergraph, delta: float, beta: float) -> float:
    coeffs = star_polynomial(h)
    return float(abs(eval_poly(coeffs, Fraction(beta)) - Fraction(1.0 + delta)))


# -- rho_LZ --------------------------------------------------------------------

def _value_label(v: Fraction) -> str:
    return f"value {v}"


def rho_LZ(h: Hypergraph, delta: float, method: str = "auto",
           model: RateModel | None = None, seed: int = 0) -> RateResult:
    """inf Vol_H(xi) over compatibility functions with P_H(xi) >= 1 + delta."""
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    model = model or RateModel(h)
    if method not in ("auto", "structured", "generic"):
        raise InputError(f"unknown rho_LZ method {method!r}")
    if not model.values:
        if delta == 0:
            return RateResult(0.0, "zero", "structured")
        return RateResult(math.inf, "infeasible", "structured")
    if method == "structured" or (method == "auto" and model.single_valued):
        if not model.single_valued:
            raise InputError("structured solver needs every stable labeling to be single-valued")
        return _rho_structured(model, delta)
    return _rho_generic(model, delta, seed=seed)


def _rho_structured(model: RateModel, delta: float) -> RateResult:
    data = model.axis_data
    vals = list(data)
    costs = [data[v][0] for v in vals]

    def make(exps):
        return lambda a: sum(a ** float(e) for e in exps)

    funcs = [make(data[v][1]) for v in vals]
    labels = [_value_label(v) for v in vals]
    if delta == 0:
        return RateResult(0.0, min(labels), "structured", 0.0)
    value, k = minimize_separable(costs, funcs, delta, labels)
    alpha = value / costs[k]
    return RateResult(value, labels[k], "structured", abs(funcs[k](alpha) - delta))


def _rho_generic(model: RateModel, delta: float, starts: int = GENERIC_STARTS,
                 seed: int = 0) -> RateResult:
    """Multi-start Nelder-Mead on log xi, projected onto P_H = 1 + delta.

    P_H - 1 is a positive combination of exponentials in log xi, so scaling
    every xi(t) by a common factor e^s moves it monotonically; the
    scale s is found by safeguarded Newton on log(P_H - 1) = log(delta),
    which is convex in s.  The reduced objective is invariant under shifts
    of log xi, so iterates are normalised to max 0.
    """
    if delta == 0:
        return RateResult(0.0, "zero", "generic", 0.0)
    (PA, pc), (VA, vc) = model.arrays
    d = len(model.values)
    # plain-float copies: the term lists are short and numpy call overhead dominates
    p_rows = [(list(map(float, row)), math.log(c), float(row.sum())) for row, c in zip(PA, pc)]
    v_rows = [(list(map(float, row)), float(c)) for row, c in zip(VA, vc)]
    log_delta = math.log(delta)

    def scale_for(y):
        base = [(sum(a * b for a, b in zip(row, y)) + lc, m) for row, lc, m in p_rows]
        # g(s) = log(P - 1) - log(delta) is convex and increasing in s; start to
        # the right of the root (each term alone reaching delta) and Newton from there
        s = max((log_delta - b) / m for b, m in base)
        for _ in range(100):
            z = [b + m * s for b, m in base]
            zmax = max(z)
            w = [math.exp(t - zmax) for t in z]
            tot = sum(w)
            val = zmax + math.log(tot) - log_delta
            if val <= 1e-15:
                break
            der = sum(wi * m for wi, (_, m) in zip(w, base)) / tot
            s -= val / der
        return s

    def project(y):
        top = max(y)
        y = [max(t - top, LOG_FLOOR) for t in y]
        s = scale_for(y)
        return [t + s for t in y]

    def objective(y):
        x = project(list(map(float, y)))
        return sum(c * math.exp(sum(a * b for a, b in zip(row, x))) for row, c in v_rows)

    rng = np.random.default_rng(seed)
    best_val, best_y = math.inf, None
    for _ in range(starts):
        y0 = rng.uniform(math.log(1e-4), math.log(1e2), size=d)  # log-uniform starts
        res = minimize(objective, y0, method="Nelder-Mead",
                       options={"xatol": 1e-6, "fatol": GENERIC_TOL * 1e-2, "maxiter": 400 * d})
        if res.fun < best_val:
            best_val, best_y = float(res.fun), np.asarray(res.x)
    # polish: push coordinates to the floor one at a time while that helps
    y = project(list(best_y))
    improved = True
    while improved:
        improved = False
        for j in range(d):
            if y[j] - max(y) <= LOG_FLOOR + 1:
                continue
            trial = list(y)
            trial[j] = max(y) + LOG_FLOOR
            val = objective(trial)
            if val < best_val - 1e-15:
                best_val, y, improved = val, project(trial), True
    res = minimize(objective, np.array(y), method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000 * d})
    if res.fun < best_val:
        best_val, y = float(res.fun), project(list(res.x))
    x = np.array(project(y))
    xi = CompatibilityAssignment({t: math.exp(x[i]) for i, t in enumerate(model.values)})
    residual = abs(model.p_H(xi) - (1.0 + delta))
    # the dominant Vol contribution names the branch
    contrib = vc * np.exp(VA @ x)
    top = int(np.argmax(contrib))
    used = [model.values[i] for i in range(d) if VA[top, i]]
    branch = "values " + ",".join(str(v) for v in used) if len(used) > 1 else _value_label(used[0])
    return RateResult(best_val, branch, "generic", residual)


# -- rho_bi / rho_new -----------------------------------------------------------

def _two_branch(h: Hypergraph, delta: float, with_surface: bool, solver: str) -> RateResult:
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    coeffs = star_polynomial(h)
    beta = beta_H(h, delta, coeffs)
    hub = h.r * beta
    res = float(abs(eval_poly(coeffs, Fraction(beta)) - Fraction(1.0 + delta)))
    cands = [(hub, "hub")]
    if with_surface:
        cands.append((delta ** (h.max_degree / h.n_edges), "clique"))
    value, branch = min(cands)
    return RateResult(value, branch, solver, res if branch == "hub" else 0.0)


def rho_bi(h: Hypergraph, delta: float) -> RateResult:
    return _two_branch(h, delta, h.is_regular, "formula")


def rho_new(h: Hypergraph, delta: float) -> RateResult:
    strict = nu_star(h) * h.max_degree == h.n_edges  # exact rational comparison
    return _two_branch(h, delta, strict, "formula")


# -- closed forms ---------------------------------------------------------------

FAMILIES = ("clique", "rpartite_regular", "rpartite_min", "cycle", "cycle_subgraph",
            "fano", "fano_minus_edge")


def closed_form(family: str, params: Mapping | None, delta: float) -> RateResult:
    """The known formula for one of the named families."""
    params = dict(params or {})
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")

    def pick(*cands):
        value, branch = min(cands)
        return RateResult(value, branch, "closed_form", 0.0)

    if family == "clique":
        r, k = int(params["r"]), int(params["k"])
        if k <= r:
            raise InputError("clique needs k > r")
        return pick((delta ** (r / k), "clique"), (r * delta / k, "hub"))
    if family == "rpartite_regular":
        r, m = int(params["r"]), int(params["m"])
        if m < 2:
            raise InputError("regular r-partite family needs parts of size >= 2")
        return pick((delta ** (1 / m), "clique"), (r * ((1 + delta / r) ** (1 / m) - 1), "hub"))
    if family == "rpartite_min":
        parts = [int(x) for x in params["parts"]]
        r = len(parts)
        if r < 2 or any(parts[0] >= m for m in parts[1:]):
            raise InputError("rpartite_min needs a strictly smallest first part")
        return pick((r * ((1 + delta) ** (1 / parts[0]) - 1), "hub"))
    if family == "cycle":
        r, ell = int(params["r"]), int(params["length"])
        g = tight_cycle(r, ell)
        return pick((delta ** (r / ell), "clique"), (r * beta_H(g, delta), "hub"))
    if family == "cycle_subgraph":
        g = params["graph"]
        if g.max_degree != g.r:
            raise InputError("cycle subgraph must keep maximum degree r")
        return pick((g.r * beta_H(g, delta), "hub"))
    if family == "fano":
        return pick((3 * delta / 7, "value 1"), (delta ** (3 / 7), "value 1/3"))
    if family == "fano_minus_edge":
        return pick((delta / 8, "value 1"), (math.sqrt(delta) / 2, "value 1/2"))
    raise InputError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def family_of(h: Hypergraph):
    """(family, params) if ``h`` is literally one of the generated family members."""
    if h == fano():
        return "fano", {}
    if h == fano_minus_edge():
        return "fano_minus_edge", {}
    r, n = h.r, h.n_vertices
    if n > r and h == clique(r, n):
        return "clique", {"r": r, "k": n}
    if n > r and h == tight_cycle(r, n):
        return "cycle", {"r": r, "length": n}
    return None


def partite_family(parts: Sequence[int]):
    parts = list(parts)
    if len(set(parts)) == 1:
        return "rpartite_regular", {"r": len(parts), "m": parts[0]}
    return "rpartite_min", {"parts": parts}


# -- cycle constant ------------------------------------------------------------

def cycle_range(r: int, upto: int) -> list[int]:
    """L_r intersected with [1, upto]: union over i >= 2 of (i(r-1), ir]."""
    out = set()
    i = 2
    while i * (r - 1) < upto:
        out.update(range(i * (r - 1) + 1, min(i * r, upto) + 1))
        i += 1
    return sorted(out)


def cycle_constant_power(ell: int, r: int) -> Fraction:
    """C'(ell, r)^ell as an exact rational.

    C'(ell, r) = min over 1 + [r | ell] <= k <= d of
    binom(r, rk/d) * binom(d, k)^(-r/ell), d = gcd(ell, r); raising to the
    power ell keeps everything rational.
    """
    d = math.gcd(ell, r)
    k0 = 1 + (1 if ell % r == 0 else 0)
    cands = [Fraction(math.comb(r, r * k // d) ** ell, math.comb(d, k) ** r)
             for k in range(k0, d + 1)]
    if not cands:
        raise InputError(f"no admissible k for ell={ell}, r={r}")
    return min(cands)

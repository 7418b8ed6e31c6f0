import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tailrate import hypergraph as hg
from tailrate.density import (WeightedRGraph, entropy_Ip, finner_check, finner_corollary, gradient,
                              make_plan, nmf_upper_bound, plant_clique, plant_hubs, sample_gnp,
                              sweep_planted, t_density)
from tailrate.density.entropy import i_p, j_p
from tailrate.density.contraction import t_density_kernel
from tailrate.density.weighted import kernel_from_vector, rsets
from tailrate.errors import CapacityError, InputError

from corpus import CORPUS
from oracles import brute_density, expected_density

TRIANGLE = hg.from_edges(2, 3, [(0, 1), (1, 2), (0, 2)])


def random_Q(n, r, rng):
    vec = rng.random(math.comb(n, r))
    return WeightedRGraph.from_vector(n, r, vec, 0.5)


@pytest.mark.parametrize("name,h", CORPUS, ids=[c[0] for c in CORPUS])
def test_contraction_matches_brute_force(name, h):
    rng = np.random.default_rng(h.n_edges * 31 + h.n_vertices)
    n = 5 if h.n_vertices > 6 else 6
    Q = random_Q(n, h.r, rng)
    plan = make_plan(h)
    assert plan.width <= max(len(h.non_isolated) - 1, 0)
    got = t_density(h, Q, plan)
    assert got == pytest.approx(brute_density(h, Q.kernel()), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("n", [6, 7, 8])
def test_fano_full_kernel(n):
    Q = WeightedRGraph(n, 3, 1.0)
    brute = brute_density(hg.fano(), Q.kernel())
    assert t_density_kernel(hg.fano(), Q.kernel()) == pytest.approx(brute, rel=1e-12)
    assert t_density(hg.fano(), Q) == pytest.approx(brute, rel=1e-12)


def test_constant_fast_path_matches_contraction():
    for h in (TRIANGLE, hg.tight_cycle(3, 6), hg.clique(3, 5), hg.complete_r_partite(3, [2, 2, 2])):
        for n in (3, 5, 9):
            K = WeightedRGraph(n, h.r, 0.35).kernel()
            assert t_density(h, WeightedRGraph(n, h.r, 0.35)) == pytest.approx(t_density_kernel(h, K), rel=1e-12)


def test_capacity_cap():
    with pytest.raises(CapacityError):
        t_density(hg.fano(), WeightedRGraph(60, 3, 0.5, {(0, 1, 2): 1.0}))


def test_single_edge_and_zero():
    for r, n in [(2, 7), (3, 6), (4, 8)]:
        p = 0.3
        edge = hg.from_edges(r, r, [tuple(range(r))])
        got = t_density(edge, WeightedRGraph(n, r, p))
        assert got == pytest.approx(math.factorial(r) * math.comb(n, r) * p / n ** r, rel=1e-13)
        assert t_density(hg.fano() if r == 3 else edge, WeightedRGraph(n, r, 0.0)) == 0


def test_uniformity_mismatch():
    with pytest.raises(InputError):
        t_density(hg.fano(), WeightedRGraph(6, 2, 0.5))


@pytest.mark.parametrize("h", [TRIANGLE, hg.fano(), hg.tight_cycle(3, 5), hg.clique(3, 4)],
                         ids=["triangle", "fano", "C3_5", "K4_3"])
def test_large_n_deviation(h):
    n, q = 50, 0.4
    got = t_density(h, WeightedRGraph(n, h.r, q))
    V = len(h.non_isolated)
    assert abs(got / q ** h.n_edges - 1) <= 2 * V * V / n


@pytest.mark.parametrize("h", [TRIANGLE, hg.fano(), hg.tight_cycle(3, 6)], ids=["triangle", "fano", "C3_6"])
def test_gradient_matches_finite_differences(h):
    rng = np.random.default_rng(3)
    n = 5
    vec = rng.uniform(0.2, 0.8, math.comb(n, h.r))
    Q = WeightedRGraph.from_vector(n, h.r, vec, 0.5)
    g = gradient(h, Q)
    eps = 1e-6
    for i in rng.choice(len(vec), 6, replace=False):
        up, dn = vec.copy(), vec.copy()
        up[i] += eps
        dn[i] -= eps
        fd = (t_density(h, WeightedRGraph.from_vector(n, h.r, up, 0.5))
              - t_density(h, WeightedRGraph.from_vector(n, h.r, dn, 0.5))) / (2 * eps)
        assert abs(g[i] - fd) <= 1e-5 * abs(fd)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_monotone_in_single_entry(seed, bump):
    rng = np.random.default_rng(seed)
    n = 5
    vec = rng.random(math.comb(n, 3))
    i = int(rng.integers(len(vec)))
    lo = WeightedRGraph.from_vector(n, 3, vec, 0.5)
    vec2 = vec.copy()
    vec2[i] = max(vec[i], bump)
    hi = WeightedRGraph.from_vector(n, 3, vec2, 0.5)
    h = hg.tight_cycle(3, 5)
    assert t_density(h, hi) >= t_density(h, lo) - 1e-15


@pytest.mark.parametrize("h,n,p", [(TRIANGLE, 6, 0.5), (hg.tight_cycle(3, 5), 6, 0.5),
                                   (hg.clique(3, 4), 5, 0.6)], ids=["triangle", "C3_5", "K4_3"])
def test_monte_carlo_mean(h, n, p):
    vals = np.array([t_density(h, sample_gnp(n, p, h.r, s)) for s in range(400)])
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    assert abs(vals.mean() - expected_density(h, n, p)) <= 3 * se


def test_sampler():
    assert sample_gnp(8, 0.0, 3, 1).n_edges() == 0
    assert sample_gnp(8, 1.0, 3, 1).n_edges() == math.comb(8, 3)
    a, b = sample_gnp(9, 0.4, 3, 17), sample_gnp(9, 0.4, 3, 17)
    assert a.overrides == b.overrides
    counts = np.array([sample_gnp(10, 0.3, 3, s).n_edges() for s in range(2000)])
    sigma = math.sqrt(120 * 0.3 * 0.7)
    assert abs(counts.mean() - 36) <= 3 * sigma / math.sqrt(2000)
    assert counts.std() == pytest.approx(sigma, rel=0.1)


def test_weighted_validation_and_json():
    with pytest.raises(InputError):
        WeightedRGraph(5, 2, 1.5)
    with pytest.raises(InputError):
        WeightedRGraph(5, 2, 0.5, {(0, 0): 0.2})
    with pytest.raises(InputError):
        WeightedRGraph(5, 2, 0.5, {(0, 5): 0.2})
    Q = WeightedRGraph(6, 3, 0.2, {(2, 0, 1): 0.9})
    assert Q.q((1, 2, 0)) == 0.9 and Q.q((3, 4, 5)) == 0.2
    assert WeightedRGraph.from_json(Q.to_json()) == Q
    K = Q.kernel()
    assert K[0, 1, 2] == K[2, 1, 0] == 0.9 and K[0, 0, 1] == 0
    assert np.array_equal(kernel_from_vector(6, 3, Q.vector()), K)
    assert len(rsets(6, 3)) == 20


def test_entropy_examples():
    for p in (1e-3, 0.1, 0.5, 0.9):
        assert i_p(p, p) == pytest.approx(0, abs=1e-15)
        assert i_p(1.0, p) == pytest.approx(math.log(1 / p))
        assert i_p(0.0, p) == pytest.approx(math.log(1 / (1 - p)))
    p = 1e-3
    xs = np.linspace(0, 1 - p, 2001)
    assert np.all(j_p(xs, p) >= xs ** 2)
    with pytest.raises(InputError):
        i_p(1.2, 0.5)
    with pytest.raises(InputError):
        i_p(0.5, 0.0)
    with pytest.raises(InputError):
        j_p(-0.5, 0.1)


def test_planted_costs():
    n, p = 12, 0.1
    assert plant_clique(n, p, 0).cost == 0
    assert plant_hubs(n, p, []).cost == 0
    for r in (2, 3):
        for m in (3, 5, 8):
            pl = plant_clique(n, p, m, r=r)
            assert pl.cost == pytest.approx(math.comb(m, r) * i_p(1.0, p), rel=1e-12)
            assert entropy_Ip(pl.Q, p) == pytest.approx(pl.cost)
        for s in (1, 2, 4):
            pl = plant_hubs(n, p, range(s), r=r)
            assert pl.cost == pytest.approx((math.comb(n, r) - math.comb(n - s, r)) * i_p(1.0, p), rel=1e-12)
    with pytest.raises(InputError):
        plant_clique(5, p, 6)


@pytest.fixture(scope="module")
def triangle_nmf():
    return nmf_upper_bound(TRIANGLE, 30, 0.1, 1.0)


def test_nmf_feasible_and_below_sweep(triangle_nmf):
    res = triangle_nmf
    assert res.density >= res.target - 1e-12
    assert t_density(TRIANGLE, res.Q) >= res.target - 1e-12
    assert entropy_Ip(res.Q, 0.1) == pytest.approx(res.value)
    sweep = sweep_planted(TRIANGLE, 30, 0.1, 1.0)
    best = min(pl.cost for pl in sweep.values() if pl is not None)
    assert res.value <= best * (1 + 1e-12)
    assert res.gradient_evals <= 400


def test_nmf_delta_zero():
    res = nmf_upper_bound(TRIANGLE, 20, 0.2, 0.0)
    assert res.value == 0 and res.Q.overrides == {} and res.Q.default_q == 0.2


def test_nmf_rejects_bad_input():
    with pytest.raises(InputError):
        nmf_upper_bound(TRIANGLE, 20, 1.0, 1.0)
    with pytest.raises(InputError):
        nmf_upper_bound(TRIANGLE, 20, 0.2, -1.0)


def test_finner_constant_and_matching():
    F = hg.fano()
    res = finner_check(F, np.full((4, 4, 4), 0.7), [1 / 3] * 7)
    assert res.holds
    # matching with unit weights: independent integrals, equality
    M = hg.from_edges(2, 4, [(0, 1), (2, 3)])
    rng = np.random.default_rng(0)
    tabs = [rng.random((5, 5)), rng.random((5, 5))]
    res = finner_check(M, tabs, [1, 1])
    assert res.lhs == pytest.approx(res.rhs, rel=1e-12)
    with pytest.raises(InputError):
        finner_check(F, np.ones((3, 3, 3)), [1] * 7)


def test_finner_constant_equality():
    # with the full table (diagonal included) a constant f gives c^{|E|} on both sides
    F = hg.tight_cycle(3, 5)
    c = 0.6
    res = finner_corollary(F, np.full((3, 3, 3), c))
    assert res.lhs == pytest.approx(c ** 5, rel=1e-12) and res.rhs == pytest.approx(c ** 5, rel=1e-12)


def test_finner_random():
    rng = np.random.default_rng(2024)
    shapes = [hg.fano(), hg.tight_cycle(3, 5), TRIANGLE, hg.clique(3, 4),
              hg.from_edges(2, 4, [(0, 1), (1, 2), (2, 3)])]
    fails = 0
    for i in range(1000):
        F = shapes[i % len(shapes)]
        m = int(rng.integers(2, 7 if F.r == 2 else 5))
        f = rng.random((m,) * F.r) ** rng.uniform(0.5, 4)
        if not finner_corollary(F, f).holds:
            fails += 1
    assert fails == 0

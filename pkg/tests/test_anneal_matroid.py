import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from annealmax.anneal_matroid import (
    START_T,
    START_VALUE,
    Alg2Config,
    ExchangeGraph,
    Matching,
    apply_matching,
    build_exchange_graph,
    complementary_check,
    discrete_local_search,
    fixed_point_residual_matroid,
    fractional_local_search,
    max_weight_matching,
    phi_lower_bound_matroid,
    phi_max_matroid,
    run_alg2,
    solve_beta_matroid,
)
from annealmax.matroid import EMPTY, ConvexCombination, PartitionMatroid, UniformMatroid, exchange_candidate
from annealmax.multilinear import EXACT, F_eval, grad
from annealmax.oracle import Base, Cardinality, brute_force_max
from annealmax.setfn import ModularFunction, full_mask, random_instance, to_mask, zero_function

from .conftest import oracles, single_edge


def graph_from(W):
    W = np.asarray(W, dtype=float)
    return ExchangeGraph(list(range(W.shape[0])), W.shape[1], W, {})


def brute_matching_weight(W):
    """Best total positive weight over all partial matchings, by enumeration."""
    rows, cols = W.shape
    best = 0.0
    # each row picks a distinct column or None
    for pick in itertools.product([None, *range(cols)], repeat=rows):
        used = [c for c in pick if c is not None]
        if len(used) != len(set(used)):
            continue
        total = sum(W[r, c] for r, c in enumerate(pick) if c is not None and W[r, c] > 0)
        best = max(best, total)
    return best


def test_config():
    assert Alg2Config().resolve_N(5) == 64
    assert Alg2Config().resolve_N(10) == 100
    assert Alg2Config.asymptotic(3).N == 81
    with pytest.raises(ValueError):
        Alg2Config(N=3).resolve_N(5)


# -- fractional local search -------------------------------------------------------------------


def test_local_search_at_zero_temperature(tight):
    cc = ConvexCombination.empty(8, 16)
    out = fractional_local_search(tight, UniformMatroid(8, 2), cc, 0.0)
    assert out.sets == cc.sets


def test_local_search_single_edge_full_temperature():
    out = fractional_local_search(single_edge(), UniformMatroid(2, 1), ConvexCombination.empty(2, 4), 1.0)
    assert out.point().tolist() == [1.0, 0.0]
    assert F_eval(single_edge(), out.point()) == 1


def test_local_search_modular_saturates_box():
    # both coordinates fit under the box and the rank bound: (1/2, 1/2) has sum 1
    f = ModularFunction(2, (3.0, 1.0))
    out = fractional_local_search(f, UniformMatroid(2, 1), ConvexCombination.empty(2, 4), 0.5)
    assert out.point().tolist() == [0.5, 0.5]
    assert F_eval(f, out.point()) == 2.0
    out = fractional_local_search(f, UniformMatroid(2, 1), ConvexCombination.empty(2, 4), 0.75)
    assert out.point().tolist() == [0.75, 0.25]


def test_local_search_does_not_mutate_input(tight):
    cc = ConvexCombination.empty(8, 8)
    fractional_local_search(tight, UniformMatroid(8, 2), cc, 0.5)
    assert cc.counts.sum() == 0


@given(oracles(max_n=6), st.integers(1, 8), st.integers(0, 3))
def test_local_search_postconditions(f, k, r):
    N = 8
    m = UniformMatroid(f.n, 1 + r % 3)
    cfg = Alg2Config(mode=EXACT)
    out = fractional_local_search(f, m, ConvexCombination.empty(f.n, N), k / N, cfg)
    out.validate(m)
    assert out.counts.max() <= k
    x = out.point()
    cur = F_eval(f, x, EXACT)
    assert cur >= F_eval(f, np.zeros(f.n), EXACT)
    # no add / remove / swap on a single member set, within the box and the matroid, improves F
    for S in out.sets:
        members = [i for i in range(f.n) if S >> i & 1]
        outsiders = [i for i in range(f.n) if not S >> i & 1]
        edits = [(None, j) for j in members]
        edits += [(i, j) for i in outsiders for j in [None, *members]]
        for i, j in edits:
            T = S
            if i is not None:
                if out.counts[i] >= k:
                    continue
                T |= 1 << i
            if j is not None:
                T &= ~(1 << j)
            if not m.is_independent(T):
                continue
            y = x.copy()
            if i is not None:
                y[i] += 1 / N
            if j is not None:
                y[j] -= 1 / N
            assert F_eval(f, y, EXACT) <= cur + 1e-9 * abs(cur) + 1e-9


# -- complementary check -----------------------------------------------------------------------


def test_complementary_all_empty_single_threshold(tight):
    m = UniformMatroid(8, 2)
    res = complementary_check(tight, m, ConvexCombination.empty(8, 4))
    assert [lvl[:2] for lvl in res.levels] == [(0.0, 255)]
    assert res.best_value == tight.value(res.best_set)
    assert m.is_independent(res.best_set)


def test_complementary_threshold_sets(tight):
    m = UniformMatroid(8, 2)
    cc = ConvexCombination.from_sets(8, [{4}, {4}, {4}, set()])
    res = complementary_check(tight, m, cc)
    assert [(lam, T) for lam, T, _, _ in res.levels] == [(0.0, 255 & ~(1 << 4)), (0.75, 255)]
    assert not (res.levels[0][2] >> 4) & 1


def test_complementary_zero():
    assert complementary_check(zero_function(3), UniformMatroid(3, 1), ConvexCombination.empty(3, 2)).best_value == 0


def test_complementary_uses_cache(tight):
    cache = {}
    m = UniformMatroid(8, 2)
    complementary_check(tight, m, ConvexCombination.empty(8, 4), cache)
    assert list(cache) == [255]
    cache[255] = (0, -1.0)
    assert complementary_check(tight, m, ConvexCombination.empty(8, 4), cache).best_value == -1.0


@given(oracles(max_n=8), st.integers(0, 255), st.integers(1, 3))
def test_discrete_local_search_is_local(f, ground, k):
    ground &= full_mask(f.n)
    m = UniformMatroid(f.n, k)
    s = discrete_local_search(f, m, ground)
    assert m.is_independent(s) and s & ~ground == 0
    v = f.value(s)
    for i in range(f.n):
        if (ground >> i) & 1 and not (s >> i) & 1:
            if m.is_independent(s | 1 << i):
                assert f.value(s | 1 << i) <= v + 1e-9
            for j in range(f.n):
                if (s >> j) & 1:
                    assert f.value((s & ~(1 << j)) | 1 << i) <= v + 1e-9
        if (s >> i) & 1:
            assert f.value(s & ~(1 << i)) <= v + 1e-9


# -- exchange graph and matching ----------------------------------------------------------------


def test_exchange_graph_without_saturated_elements(tight):
    g = build_exchange_graph(tight, UniformMatroid(8, 2), ConvexCombination.empty(8, 4), 0.5)
    assert g.left == [] and list(g.edges) == []


def test_exchange_graph_single_set_forced_partner():
    a, b = 0, 1
    cc = ConvexCombination.from_sets(2, [{a}])
    gvec = np.array([0.25, 1.0])
    g = build_exchange_graph(None, UniformMatroid(2, 1), cc, 0.0, gradient=gvec)
    assert g.left == [b]
    assert list(g.edges) == [(b, 0, 0.75)]
    assert g.partner[(b, 0)] == a


def test_exchange_graph_no_edge_when_all_sets_hold_i():
    cc = ConvexCombination.from_sets(3, [{0}, {0}])
    g = build_exchange_graph(None, UniformMatroid(3, 2), cc, 1.0, gradient=np.zeros(3))
    assert g.left == [0]
    assert list(g.edges) == []


@given(oracles(max_n=6), st.integers(0, 10_000))
def test_exchange_graph_weights_match_exchange_candidate(f, seed):
    rng = np.random.default_rng(seed)
    m = PartitionMatroid(f.n, (frozenset(range(f.n // 2)), frozenset(range(f.n // 2, f.n))), (1, 2))
    indep = [s for s in range(1 << f.n) if m.is_independent(s)]
    N = 4
    cc = ConvexCombination(f.n, [int(rng.choice(indep)) for _ in range(N)])
    k = int(cc.counts.max())
    g = grad(f, cc.point(), EXACT)
    graph = build_exchange_graph(f, m, cc, k / N, gradient=g)
    assert graph.left == [i for i in range(f.n) if cc.counts[i] == k]
    for a, i in enumerate(graph.left):
        for ell, s in enumerate(cc.sets):
            if (s >> i) & 1:
                assert np.isnan(graph.weights[a, ell])
                continue
            b = exchange_candidate(m, s, i, g)
            assert graph.partner[(i, ell)] == b
            assert graph.weights[a, ell] == pytest.approx(g[i] - (0.0 if b is EMPTY else g[b]))


def test_matching_examples():
    assert max_weight_matching(ExchangeGraph([], 3, np.zeros((0, 3)), {})).weight == 0
    one = max_weight_matching(graph_from([[0.5]]))
    assert one.pairs == [(0, 0)] and one.weight == 0.5
    two = max_weight_matching(graph_from([[2, 1], [1, 2]]))
    assert two.pairs == [(0, 0), (1, 1)] and two.weight == 4


def test_matching_skips_nonpositive_and_missing_edges():
    m = max_weight_matching(graph_from([[-1.0, np.nan], [0.0, 3.0]]))
    assert m.pairs == [(1, 1)] and m.weight == 3


@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 10_000))
def test_matching_is_optimal_against_enumeration(rows, cols, seed):
    rng = np.random.default_rng(seed)
    W = rng.normal(size=(rows, cols))
    W[rng.random((rows, cols)) < 0.2] = np.nan
    m = max_weight_matching(graph_from(W))
    assert len({i for i, _ in m.pairs}) == len(m.pairs) == len({c for _, c in m.pairs})
    assert m.weight == pytest.approx(sum(W[i, c] for i, c in m.pairs))
    assert m.weight == pytest.approx(brute_matching_weight(W))


def test_apply_matching_examples():
    a, b = 0, 1
    cc = ConvexCombination.from_sets(2, [{a}])
    graph = ExchangeGraph([b], 1, np.array([[1.0]]), {(b, 0): a})
    assert apply_matching(cc, Matching(), graph).sets == cc.sets
    out = apply_matching(cc, Matching([(b, 0)], 1.0), graph, UniformMatroid(2, 1))
    assert out.sets == [to_mask({b})]
    assert out.point().tolist() == [0.0, 1.0]


def test_apply_matching_rejects_stale_graph():
    cc = ConvexCombination.from_sets(2, [{1}])
    graph = ExchangeGraph([1], 1, np.array([[1.0]]), {(1, 0): EMPTY})
    with pytest.raises(Exception):
        apply_matching(cc, Matching([(1, 0)], 1.0), graph)


def test_apply_matching_raises_each_coordinate_by_at_most_delta(tight):
    rng = np.random.default_rng(0)
    m = UniformMatroid(8, 3)
    indep = [s for s in range(256) if m.is_independent(s)]
    for _ in range(30):
        cc = ConvexCombination(8, [int(rng.choice(indep)) for _ in range(6)])
        k = int(cc.counts.max())
        graph = build_exchange_graph(tight, m, cc, k / 6)
        out = apply_matching(cc, max_weight_matching(graph), graph, m)
        out.validate(m)
        assert (out.counts - cc.counts).max() <= 1


# -- full run ---------------------------------------------------------------------------------


def test_run_alg2_zero():
    res = run_alg2(zero_function(3), UniformMatroid(3, 2), Alg2Config(N=9))
    assert res.best_value == 0 and res.best_set == 0
    assert res.violations == []


def test_run_alg2_single_edge():
    res = run_alg2(single_edge(), UniformMatroid(2, 1), Alg2Config(N=8))
    assert res.best_value == 1 and res.witness == {0}


def test_run_alg2_tight_cardinality_two(tight):
    m = UniformMatroid(8, 2)
    opt = brute_force_max(tight, Cardinality(2)).opt
    assert opt == 28
    res = run_alg2(tight, m)
    assert 0.30 * opt <= res.best_value <= opt
    assert m.is_independent(res.best_set)
    assert res.best_value >= res.complementary_value
    assert res.violations == []


def test_run_alg2_records_and_observer(tight):
    seen = []
    res = run_alg2(tight, UniformMatroid(8, 2), Alg2Config(N=16), observer=seen.append)
    assert len(res.records) == len(seen) == 17
    assert [r.t for r in res.records] == [k / 16 for k in range(17)]
    assert all(s.point.max() <= s.t + 1e-12 for s in seen)
    best = [r.best_complementary for r in res.records]
    assert best == sorted(best)


def test_run_alg2_deterministic(tight):
    a = run_alg2(tight, UniformMatroid(8, 3), Alg2Config(N=20))
    b = run_alg2(tight, UniformMatroid(8, 3), Alg2Config(N=20))
    assert (a.best_value, a.best_set, [r.F for r in a.records]) == (b.best_value, b.best_set, [r.F for r in b.records])


@given(oracles(max_n=7), st.integers(1, 3))
def test_run_alg2_bounded_by_opt(f, k):
    m = UniformMatroid(f.n, k)
    res = run_alg2(f, m, Alg2Config(N=max(f.n * f.n, 8), mode=EXACT))
    assert res.violations == []
    assert m.is_independent(res.best_set)
    assert res.best_value <= brute_force_max(f, Cardinality(k)).opt + 1e-9


def test_run_alg2_partition_matroid():
    f = random_instance("digraph-cut", 8, 0.4, (1, 10), seed=11)
    m = PartitionMatroid(8, (frozenset(range(4)), frozenset(range(4, 8))), (1, 2))
    opt = brute_force_max(f, Base(m)).opt
    res = run_alg2(f, m)
    assert 0.30 * opt <= res.best_value <= opt


# -- analysis ---------------------------------------------------------------------------------


def test_matroid_start_constants():
    assert START_T == pytest.approx(0.381966011250105)
    assert START_VALUE == pytest.approx((1 - START_T) / 2)


@pytest.mark.parametrize("t0,v0,beta", [(START_T, START_VALUE, 0.3), (0.2, 0.2, 0.33)])
def test_matroid_phi_solves_the_differential_equation(t0, v0, beta):
    # (1 - t) phi' = 1 - 2 phi - 2 t beta
    sol = solve_ivp(
        lambda t, y: [(1 - 2 * y[0] - 2 * t * beta) / (1 - t)],
        (t0, 0.99),
        [v0],
        rtol=1e-11,
        atol=1e-12,
        dense_output=True,
    )
    for t in np.linspace(t0 + 0.01, 0.99, 25):
        assert phi_lower_bound_matroid(t, t0, v0, beta) == pytest.approx(sol.sol(t)[0], abs=1e-8)


def test_matroid_beta_fixed_point():
    beta = solve_beta_matroid()
    assert beta > 0.325
    assert abs(fixed_point_residual_matroid(beta)) <= 1e-6
    t, v = phi_max_matroid(START_T, START_VALUE, beta)
    grid = max(phi_lower_bound_matroid(s, START_T, START_VALUE, beta) for s in np.linspace(START_T + 1e-6, 1 - 1e-6, 20001))
    assert v == pytest.approx(grid, abs=1e-7)
    assert START_T < t < 1 and math.isfinite(v)

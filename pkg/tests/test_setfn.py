import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from annealmax.hardness import build_instance1
from annealmax.setfn import (
    TIGHT_EXAMPLE_ARCS,
    CoverageFunction,
    DirectedHyperedge,
    HypergraphCut,
    ModularFunction,
    SetFunctionError,
    TableFunction,
    check_submodular,
    dumps,
    loads,
    random_instance,
    to_mask,
    to_set,
    zero_function,
)

from .conftest import oracles


def plain_cut(arcs, s):
    return sum(w for u, v, w in arcs if u in s and v not in s)


def test_tight_example_values(tight):
    assert tight.value({4, 5, 6, 7}) == 35
    assert tight.value({1, 3, 5, 7}) == 15
    assert tight.value(set()) == 0


def test_tight_example_shape(tight):
    assert len(tight.edges) == 13
    # the listed arc weights add to 60
    assert tight.total_weight == 60


def test_tight_example_exhaustive_max(tight):
    t = tight.table
    assert t.max() == 35
    assert [sorted(to_set(int(m))) for m in np.flatnonzero(t == 35)] == [[4, 5, 6, 7]]


def test_cut_matches_plain_digraph_cut(tight):
    for m in range(256):
        assert tight.value(m) == plain_cut(TIGHT_EXAMPLE_ARCS, to_set(m))


@given(st.integers(0, 500), st.integers(2, 12))
def test_cut_identity_random(seed, n):
    rng = np.random.default_rng(seed)
    arcs = [(u, v, float(rng.integers(1, 9))) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3]
    f = HypergraphCut.from_digraph(n, arcs)
    for m in rng.integers(0, 1 << n, size=50):
        assert f.value(int(m)) == plain_cut(arcs, to_set(int(m)))


def test_out_of_range_element_raises(tight):
    with pytest.raises(SetFunctionError):
        tight.value({8})
    with pytest.raises(SetFunctionError):
        tight.value(1 << 8)


def test_hyperedge_validation():
    with pytest.raises(SetFunctionError):
        DirectedHyperedge(frozenset(), 0)
    with pytest.raises(SetFunctionError):
        DirectedHyperedge(frozenset({1}), 1)
    with pytest.raises(SetFunctionError):
        DirectedHyperedge(frozenset({1}), 0, -1.0)
    with pytest.raises(SetFunctionError):
        HypergraphCut(3, (DirectedHyperedge(frozenset({0}), 5),))


def test_table_must_be_nonnegative():
    with pytest.raises(SetFunctionError):
        TableFunction(1, (0.0, -1.0))


def test_check_submodular_examples(tight):
    assert check_submodular(tight) == (True, None)
    and_fn = TableFunction.from_dict_of_sets(2, {(): 0, (0,): 0, (1,): 0, (0, 1): 1})
    ok, witness = check_submodular(and_fn)
    assert not ok
    assert witness == (frozenset(), 0, 1)
    f, _ = build_instance1(3)
    assert check_submodular(f)[0]


def test_check_submodular_sampled_mode():
    and_fn = TableFunction.from_dict_of_sets(2, {(0, 1): 1})
    assert not check_submodular(and_fn, samples=200, seed=1)[0]
    assert check_submodular(random_instance("coverage", 25, 0.3, (1, 5), seed=2), samples=300)[0]


@given(oracles(max_n=9))
def test_generated_instances_are_nonnegative_submodular(f):
    assert f.table.min() >= 0
    assert check_submodular(f)[0]


def test_random_instance_determinism():
    a = random_instance("digraph-cut", 8, 0.4, (1, 10), seed=7)
    b = random_instance("digraph-cut", 8, 0.4, (1, 10), seed=7)
    assert a.edges == b.edges
    assert dumps(a) == dumps(b)


def test_random_instance_single_vertex_is_zero():
    f = random_instance("digraph-cut", 1, 0.9, (1, 10), seed=3)
    assert f.table.tolist() == [0.0, 0.0]


def test_random_instance_coverage_example():
    assert check_submodular(random_instance("coverage", 6, 0.5, (1, 5), seed=1))[0]


def test_random_instance_unknown_kind():
    with pytest.raises(SetFunctionError):
        random_instance("matrix", 4)


@pytest.mark.parametrize(
    "f",
    [
        random_instance("digraph-cut", 6, 0.5, (1, 9), seed=4),
        random_instance("coverage", 5, 0.4, (1, 9), seed=4),
        ModularFunction(3, (1, 2, 5), 1),
        TableFunction.from_dict_of_sets(2, {(0,): 2, (1,): 3, (0, 1): 4}),
        CoverageFunction(2, (frozenset({0}), frozenset({0, 1})), (2, 7)),
    ],
)
def test_json_round_trip_is_value_exact(f):
    g = loads(dumps(f))
    assert type(g) is type(f)
    assert np.array_equal(g.table, f.table)


def test_zero_function():
    assert zero_function(4).table.max() == 0


def test_mask_helpers():
    for s in itertools.chain.from_iterable(itertools.combinations(range(5), r) for r in range(6)):
        assert to_set(to_mask(s)) == frozenset(s)

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from annealmax.multilinear import (
    CLOSED,
    EXACT,
    EvalMode,
    Evaluator,
    F_batch,
    F_eval,
    F_monte_carlo,
    directional_gain_G,
    grad,
    hessian,
    indicator,
    lovasz_threshold_eval,
    max_second_difference,
    mix_point,
    mixed_partial,
    two_threshold_eval,
)
from annealmax.setfn import ModularFunction, SetFunctionError, random_instance, to_mask

from .conftest import oracle_and_point, oracles, single_edge

A = {1, 3, 5, 7}


def brute_F(f, x):
    """Sum over subsets written out with itertools, independent of the library path."""
    n = f.n
    total = 0.0
    for bits in itertools.product((0, 1), repeat=n):
        pr = np.prod([x[i] if b else 1 - x[i] for i, b in enumerate(bits)])
        total += pr * f.value({i for i, b in enumerate(bits) if b})
    return total


def test_tight_value_at_three_quarters(tight):
    x = mix_point(A, 0.75, 8)
    assert F_eval(tight, x, CLOSED) == 16.25
    assert F_eval(tight, x, EXACT) == 16.25


def test_indicator_gives_f(tight):
    for m in (0, 0b10110, 0b11110000, 255):
        for mode in (CLOSED, EXACT, EvalMode("monte-carlo", 50, 3)):
            assert F_eval(tight, indicator(m, 8), mode) == tight.value(m)


def test_single_edge_half():
    assert F_eval(single_edge(), [0.5, 0.5]) == 0.25


def test_closed_form_rejected_for_non_cut():
    with pytest.raises(SetFunctionError):
        F_eval(ModularFunction(2, (1, 1)), [0.5, 0.5], CLOSED)


def test_exact_rejected_above_20():
    f = random_instance("digraph-cut", 22, 0.1, (1, 2), seed=0)
    with pytest.raises(SetFunctionError):
        F_eval(f, np.full(22, 0.5), EXACT)


def test_point_validation(tight):
    with pytest.raises(ValueError):
        F_eval(tight, np.full(8, 1.5))
    with pytest.raises(ValueError):
        F_eval(tight, np.full(7, 0.5))


def test_gradient_at_three_quarters_is_zero(tight):
    # every partial vanishes at x_{3/4}({1,3,5,7}); in particular components 2 and 5
    g = grad(tight, mix_point(A, 0.75, 8))
    assert np.all(g == 0)


def test_gradient_at_p_point_six(tight):
    g = grad(tight, mix_point(A, 0.6, 8))
    p, q = 0.6, 0.4
    assert g[2] == pytest.approx(-3 * q + p)
    assert g[5] == pytest.approx(-p + 3 * q)
    np.testing.assert_allclose(g, [-2.4, 0, -0.6, 0, 0, 0.6, 0, 2.4], atol=1e-12)


def test_gradient_modular():
    f = ModularFunction(3, (2.0, 5.0, 1.0))
    np.testing.assert_allclose(grad(f, [0.1, 0.7, 0.3]), [2, 5, 1])


@given(oracle_and_point())
def test_gradient_matches_finite_difference(fx):
    f, x = fx
    g = grad(f, x)
    h = 1e-5
    for i in range(f.n):
        lo, hi = x.copy(), x.copy()
        lo[i], hi[i] = max(0, x[i] - h), min(1, x[i] + h)
        num = (F_eval(f, hi) - F_eval(f, lo)) / (hi[i] - lo[i])
        assert abs(num - g[i]) <= 1e-6


@given(oracle_and_point(max_n=7))
def test_exact_matches_subset_sum(fx):
    f, x = fx
    assert F_eval(f, x, EXACT) == pytest.approx(brute_F(f, x), abs=1e-9)


@given(oracle_and_point(max_n=12))
def test_closed_form_matches_exact_on_cuts(fx):
    f, x = fx
    if f.kind == "hypergraph-cut":
        assert abs(F_eval(f, x, CLOSED) - F_eval(f, x, EXACT)) <= 1e-9


def test_monte_carlo_within_four_standard_errors():
    misses = 0
    for seed in range(100):
        f = random_instance("digraph-cut" if seed % 2 else "coverage", 8, 0.4, (1, 10), seed=seed)
        x = np.random.default_rng(seed).random(8)
        mean, se = F_monte_carlo(f, x, 100_000, seed)
        if abs(mean - F_eval(f, x, EXACT)) > 4 * se:
            misses += 1
    assert misses == 0


def test_monte_carlo_reproducible(tight):
    x = mix_point(A, 0.7, 8)
    assert F_monte_carlo(tight, x, 500, 9) == F_monte_carlo(tight, x, 500, 9)


def test_evaluator_common_random_numbers(tight):
    ev = Evaluator(tight, EvalMode("monte-carlo", 300, 5))
    x = mix_point(A, 0.7, 8)
    a = ev(x)
    assert ev(x) == a
    ev.refresh(1)
    b = ev(x)
    ev.refresh(0)
    assert ev(x) == a and a != b


@given(oracle_and_point(), st.integers(0, 7), st.floats(0, 1))
def test_affine_in_each_coordinate(fx, i, s):
    f, x = fx
    i %= f.n
    pts = np.repeat(x[None], 3, axis=0)
    pts[0, i], pts[1, i], pts[2, i] = 0, 1, s
    v0, v1, vs = F_batch(f, pts)
    assert abs(vs - ((1 - s) * v0 + s * v1)) <= 1e-9


@given(oracle_and_point(), st.integers(0, 7), st.integers(0, 7))
def test_mixed_partials_nonpositive(fx, i, j):
    f, x = fx
    i, j = i % f.n, j % f.n
    if i != j:
        assert mixed_partial(f, x, i, j) <= 1e-12


def test_mixed_partial_modular_zero():
    f = ModularFunction(3, (1.0, 2.0, 3.0))
    assert mixed_partial(f, [0.2, 0.5, 0.9], 0, 2) == 0


def test_mixed_partial_product_weighted_average(tight):
    x = np.full(8, 0.5)
    rest = [k for k in range(8) if k not in (3, 4)]
    expected = 0.0
    for bits in itertools.product((0, 1), repeat=6):
        s = {rest[k] for k, b in enumerate(bits) if b}
        d = tight.value(s | {3, 4}) - tight.value(s | {3}) - tight.value(s | {4}) + tight.value(s)
        expected += d / 64
    assert mixed_partial(tight, x, 3, 4) == pytest.approx(expected, abs=1e-12)


def test_mixed_partial_needs_distinct():
    with pytest.raises(ValueError):
        mixed_partial(single_edge(), [0.5, 0.5], 1, 1)


def test_hessian_bounded_by_second_difference(tight):
    H = hessian(tight, np.random.default_rng(1).random(8))
    assert np.abs(H).max() <= max_second_difference(tight) + 1e-12
    assert np.allclose(H, H.T) and np.all(np.diag(H) == 0)


def test_mix_point_examples():
    assert mix_point(set(), 0.3, 3).tolist() == pytest.approx([0.7] * 3)
    assert mix_point({0, 1, 2}, 0.3, 3).tolist() == pytest.approx([0.3] * 3)
    assert mix_point(A, 0.75, 8).tolist() == [0.25, 0.75] * 4
    assert mix_point(A, 1.0, 8).tolist() == indicator(A, 8).tolist()


def test_lovasz_examples(tight):
    assert lovasz_threshold_eval(tight, indicator({0, 4}, 8)) == tight.value({0, 4})
    assert lovasz_threshold_eval(tight, mix_point(A, 0.6, 8)) == pytest.approx(3.0)


@given(oracles(), st.integers(0, 255), st.floats(0.5, 1))
def test_lovasz_on_mix_points(f, a, p):
    a &= (1 << f.n) - 1
    full = (1 << f.n) - 1
    expected = (1 - p) * f.value(full) + (2 * p - 1) * f.value(a) + (1 - p) * f.value(0)
    assert lovasz_threshold_eval(f, mix_point(a, p, f.n)) == pytest.approx(expected, abs=1e-9)


@given(oracle_and_point())
def test_threshold_lower_bound(fx):
    f, x = fx
    assert F_eval(f, x) >= lovasz_threshold_eval(f, x) - 1e-9


@given(oracle_and_point(), st.integers(0, 255))
def test_two_threshold_lower_bound(fx, part):
    f, x = fx
    assert F_eval(f, x) >= two_threshold_eval(f, x, part & ((1 << f.n) - 1)) - 1e-9


@given(oracle_and_point(), st.integers(0, 10_000))
def test_submodular_change_bounds(fx, seed):
    f, x = fx
    xp = x + np.random.default_rng(seed).random(f.n) * (1 - x)
    Fx, Fxp = F_eval(f, x), F_eval(f, xp)
    assert Fxp <= Fx + (xp - x) @ grad(f, x) + 1e-9
    assert Fxp >= Fx + (xp - x) @ grad(f, xp) - 1e-9


@given(oracle_and_point(), st.integers(0, 10_000))
def test_second_order_remainder(fx, seed):
    f, x = fx
    d = 0.05
    y = np.random.default_rng(seed).uniform(-d, d, f.n)
    z = np.clip(x + y, 0, 1)
    y = z - x
    rem = abs(F_eval(f, z) - F_eval(f, x) - y @ grad(f, x))
    assert rem <= d * d * f.n**2 * max_second_difference(f) + 1e-9


def test_directional_gain_examples(tight):
    assert directional_gain_G(tight, indicator({4, 5, 6, 7}, 8), {4, 5, 6, 7}) == 0
    f = ModularFunction(4, (1.0, 2.0, 4.0, 8.0))
    assert directional_gain_G(f, np.zeros(4), {1, 3}) == 10
    x = mix_point(A, 0.75, 8)
    c = to_mask({4, 5, 6, 7})
    manual = sum((1 - x[i]) * g if (c >> i) & 1 else -x[i] * g for i, g in enumerate(grad(tight, x)))
    assert directional_gain_G(tight, x, c) == pytest.approx(manual)

"""Simulated annealing under a matroid independence constraint.

The fractional point x = (1/N) sum 1_{I_l} is carried as N independent sets.
The box bound t = k/N rises by 1/N per step.  Each step runs a fractional local
search inside P_t(M), a discrete local search on every lower level set of x, and
a temperature relaxation that moves saturated coordinates along a max-weight
matching of the fractional exchange graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from .matroid import EMPTY, ConvexCombination, Matroid, MatroidError
from .multilinear import AUTO, EvalMode, Evaluator, max_second_difference
from .setfn import EXHAUSTIVE_N, SetFunction, to_set


@dataclass(frozen=True)
class Alg2Config:
    N: int | None = None  # None: max(n^2, 64)
    ls_eps: float = 1e-12
    abs_eps: float = 1e-12
    mode: EvalMode = AUTO
    seed: int = 0
    check_invariants: bool = True

    def resolve_N(self, n: int) -> int:
        N = self.N if self.N is not None else max(n * n, 64)
        if N < n:
            raise ValueError(f"N = {N} is below n = {n}")
        return N

    @classmethod
    def asymptotic(cls, n: int, **kw) -> "Alg2Config":
        return cls(N=n**4, **kw)


# -- candidate enumeration over the member sets ------------------------------------------------


def _distinct(cc: ConvexCombination):
    """Distinct member masks with the first index carrying each, in index order."""
    seen: dict[int, int] = {}
    for ell, s in enumerate(cc.sets):
        seen.setdefault(s, ell)
    masks = np.array(list(seen.keys()), dtype=np.int64)
    first = np.array(list(seen.values()), dtype=np.int64)
    order = np.argsort(first, kind="stable")
    return masks[order], first[order]


def _moves(matroid: Matroid, cc: ConvexCombination, k: int):
    """All realizable single-set edits under the box bound k/N.

    Returns a list of (i_in, j_out, ell) with None for an absent side, one
    entry per distinct move vector, realized on the lowest feasible ell.
    """
    n = cc.n
    masks, first = _distinct(cc)
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    member = (masks[:, None] & bits[None, :]) != 0  # (D, n)
    room = cc.counts + 1 <= k  # may rise
    out = []

    # add i
    cand = masks[:, None] | bits[None, :]
    ok = ~member & room[None, :]
    ok &= matroid.independent_masks(cand.ravel()).reshape(cand.shape)
    for i in range(n):
        d = np.flatnonzero(ok[:, i])
        if d.size:
            out.append((i, None, int(first[d[0]])))
    # remove j
    for j in range(n):
        d = np.flatnonzero(member[:, j])
        if d.size:
            out.append((None, j, int(first[d[0]])))
    # swap j out, i in
    cand = (masks[:, None, None] & ~bits[None, None, :]) | bits[None, :, None]  # (D, i, j)
    ok = (~member)[:, :, None] & member[:, None, :] & room[None, :, None]
    if ok.any():
        ok &= matroid.independent_masks(cand.ravel()).reshape(cand.shape)
        hit = ok.any(axis=0)
        firstd = ok.argmax(axis=0)
        for i, j in zip(*np.nonzero(hit)):
            out.append((int(i), int(j), int(first[firstd[i, j]])))
    return out


def _apply_move(cc: ConvexCombination, move):
    i, j, ell = move
    s = cc.sets[ell]
    if j is not None:
        s &= ~(1 << j)
    if i is not None:
        s |= 1 << i
    cc.replace(ell, s)


def _box_index(t: float, N: int) -> int:
    return int(math.floor(t * N + 1e-9))


def fractional_local_search(
    f: SetFunction,
    matroid: Matroid,
    cc: ConvexCombination,
    t: float,
    config: Alg2Config = Alg2Config(),
    evaluator: Evaluator | None = None,
) -> ConvexCombination:
    """Best-improvement local search over moves +-e_i/N and (e_i - e_j)/N inside P_t(M)."""
    return _local_search(f, matroid, cc.copy(), _box_index(t, cc.N), config, evaluator or Evaluator(f, config.mode))


def _local_search(f, matroid, cc, k, config, ev) -> ConvexCombination:
    N = cc.N
    x = cc.point()
    cur = ev(x)
    while True:
        moves = _moves(matroid, cc, k)
        if not moves:
            return cc
        pts = np.repeat(x[None, :], len(moves), axis=0)
        for r, (i, j, _) in enumerate(moves):
            if i is not None:
                pts[r, i] += 1.0 / N
            if j is not None:
                pts[r, j] -= 1.0 / N
        vals = ev.batch(pts)
        r = int(np.argmax(vals))
        if vals[r] <= cur + config.ls_eps * abs(cur) + config.abs_eps:
            return cc
        _apply_move(cc, moves[r])
        x = cc.point()
        cur = float(vals[r])


# -- complementary solutions -------------------------------------------------------------------


def discrete_local_search(
    f: SetFunction, matroid: Matroid, ground: int, abs_eps: float = 1e-12, start: int = 0
) -> int:
    """Add/delete/swap local search for max f(S), S independent, S inside ``ground``."""
    n = f.n
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    allowed = (ground & bits) != 0
    s = start
    cur = f.value(s)
    while True:
        inside = (s & bits) != 0
        adds = (s | bits)[allowed & ~inside]
        dels = (s & ~bits)[inside]
        sw = ((s & ~bits)[None, :] | bits[:, None])[np.outer(allowed & ~inside, inside)]
        cand = np.concatenate((adds, dels, sw))
        if cand.size == 0:
            return s
        cand = cand[matroid.independent_masks(cand)]
        if cand.size == 0:
            return s
        vals = f.values(cand)
        r = int(np.argmax(vals))
        if vals[r] <= cur + abs_eps:
            return s
        s, cur = int(cand[r]), float(vals[r])


@dataclass
class ComplementaryResult:
    best_value: float
    best_set: int
    levels: list[tuple[float, int, int, float]]  # (lambda, T mask, local optimum, value)


def complementary_check(
    f: SetFunction,
    matroid: Matroid,
    cc: ConvexCombination,
    cache: dict | None = None,
    abs_eps: float = 1e-12,
) -> ComplementaryResult:
    """Local optima inside every lower level set T_{<=lam}(x), lam in {0} + coordinate values."""
    cache = {} if cache is None else cache
    counts = cc.counts
    levels = []
    best_v, best_s = -math.inf, 0
    bits = np.int64(1) << np.arange(cc.n, dtype=np.int64)
    for c in np.unique(np.concatenate(([0], counts))):
        T = int(bits[counts <= c].sum())
        if T not in cache:
            s = discrete_local_search(f, matroid, T, abs_eps)
            cache[T] = (s, f.value(s))
        s, v = cache[T]
        levels.append((float(c) / cc.N, T, s, v))
        if v > best_v:
            best_v, best_s = v, s
    return ComplementaryResult(best_v, best_s, levels)


# -- temperature relaxation --------------------------------------------------------------------


@dataclass
class ExchangeGraph:
    left: list[int]  # saturated elements, x_i = t
    N: int
    weights: np.ndarray  # (len(left), N), nan where (i, l) is not an edge
    partner: dict[tuple[int, int], object]  # (i, l) -> b_l(i) (index or EMPTY)

    @property
    def edges(self):
        for a, i in enumerate(self.left):
            for ell in range(self.N):
                w = self.weights[a, ell]
                if not np.isnan(w):
                    yield i, ell, float(w)


@dataclass
class Matching:
    pairs: list[tuple[int, int]] = field(default_factory=list)
    weight: float = 0.0


def _exchange_rows(matroid: Matroid, masks: np.ndarray, left: list[int], n: int, g: np.ndarray):
    """For each distinct set and saturated i: (is edge, best partner code, weight).

    Partner code n stands for EMPTY.  Ties go to EMPTY, then the lowest index.
    """
    bits = np.int64(1) << np.arange(n, dtype=np.int64)
    L = np.array(left, dtype=np.int64)
    ib = bits[L]  # (a,)
    edge = (masks[:, None] & ib[None, :]) == 0  # (D, a)
    # candidates: EMPTY then each j; shape (D, a, n+1)
    add = masks[:, None] | ib[None, :]
    swap = (masks[:, None, None] & ~bits[None, None, :]) | ib[None, :, None]
    cand = np.concatenate((add[:, :, None], swap), axis=2)
    member = (masks[:, None] & bits[None, :]) != 0
    feas = np.concatenate((np.ones(add.shape + (1,), bool), np.repeat(member[:, None, :], len(L), axis=1)), axis=2)
    feas &= edge[:, :, None]
    if feas.any():
        feas[feas] = matroid.independent_masks(cand[feas])
    gj = np.concatenate(([0.0], g))
    cost = np.where(feas, gj[None, None, :], np.inf)
    pick = cost.argmin(axis=2)
    best = cost.min(axis=2)
    if np.any(edge & ~np.isfinite(best)):
        raise MatroidError("exchange axiom violated: no partner for a saturated element")
    w = g[L][None, :] - best
    code = np.where(pick == 0, n, pick - 1)
    return edge, code, w


def build_exchange_graph(
    f: SetFunction | None, matroid: Matroid, cc: ConvexCombination, t: float, gradient=None, mode: EvalMode = AUTO
) -> ExchangeGraph:
    """Fractional exchange graph between saturated elements and member sets.

    ``gradient`` defaults to grad F at the current point; pass it to keep the
    weights fixed at a given snapshot.
    """
    N, n = cc.N, cc.n
    if gradient is None:
        gradient = Evaluator(f, mode).grad(cc.point())
    g = np.asarray(gradient, dtype=float)
    k = _box_index(t, N)
    left = [int(i) for i in np.flatnonzero(cc.counts == k)]
    W = np.full((len(left), N), np.nan)
    partner: dict = {}
    if left:
        masks, _ = _distinct(cc)
        edge, code, w = _exchange_rows(matroid, masks, left, n, g)
        row = {int(m): d for d, m in enumerate(masks)}
        for ell, s in enumerate(cc.sets):
            d = row[s]
            for a, i in enumerate(left):
                if edge[d, a]:
                    W[a, ell] = w[d, a]
                    c = int(code[d, a])
                    partner[(i, ell)] = EMPTY if c == n else c
    return ExchangeGraph(left, N, W, partner)


def max_weight_matching(graph: ExchangeGraph) -> Matching:
    """Exact maximum-weight matching over the positive-weight edges."""
    if not graph.left:
        return Matching()
    W = np.where(np.isnan(graph.weights), 0.0, np.maximum(graph.weights, 0.0))
    if not (W > 0).any():
        return Matching()
    rows, cols = linear_sum_assignment(W, maximize=True)
    pairs = [(graph.left[r], int(c)) for r, c in zip(rows, cols) if W[r, c] > 0]
    return Matching(sorted(pairs), float(sum(W[r, c] for r, c in zip(rows, cols) if W[r, c] > 0)))


def apply_matching(
    cc: ConvexCombination, matching: Matching, graph: ExchangeGraph, matroid: Matroid | None = None
) -> ConvexCombination:
    """Replace I_l by I_l - b_l(i) + i for every matched (i, l)."""
    out = cc.copy()
    for i, ell in matching.pairs:
        b = graph.partner[(i, ell)]
        s = out.sets[ell]
        if (s >> i) & 1:
            raise MatroidError(f"stale graph: {i} already in set {ell}")
        new = (s if b is EMPTY else s & ~(1 << b)) | (1 << i)
        if matroid is not None and not matroid.is_independent(new):
            raise MatroidError(f"exchange ({i}, {ell}) produced a dependent set")
        out.replace(ell, new)
    return out


# -- driver ------------------------------------------------------------------------------------


@dataclass
class Alg2Record:
    t: float
    F: float
    best_complementary: float
    matching_weight: float


@dataclass
class StepState:
    """Snapshot handed to observers after each temperature step."""

    k: int
    N: int
    point: np.ndarray  # fractional local optimum at t = k/N
    F: float
    gradient: np.ndarray
    complementary: ComplementaryResult
    graph: ExchangeGraph | None
    matching: Matching | None
    point_after: np.ndarray | None
    F_after: float | None
    cc: ConvexCombination

    @property
    def t(self) -> float:
        return self.k / self.N


@dataclass
class Alg2Result:
    best_value: float
    best_set: int
    rounded_value: float
    rounded_set: int
    complementary_value: float
    complementary_set: int
    final: ConvexCombination
    records: list[Alg2Record]
    violations: list[str]

    @property
    def witness(self) -> frozenset[int]:
        return to_set(self.best_set)


def run_alg2(
    f: SetFunction,
    matroid: Matroid,
    config: Alg2Config = Alg2Config(),
    observer: Callable[[StepState], None] | None = None,
) -> Alg2Result:
    from .rounding import merge_round

    n = f.n
    N = config.resolve_N(n)
    ev = Evaluator(f, config.mode)
    cc = ConvexCombination.empty(n, N)
    cache: dict = {}
    records: list[Alg2Record] = []
    violations: list[str] = []
    comp_v, comp_s = -math.inf, 0
    curv = max_second_difference(f) if config.check_invariants and n <= EXHAUSTIVE_N else None
    prev_after = None

    for k in range(N + 1):
        ev.refresh(k)
        cc = _local_search(f, matroid, cc, k, config, ev)
        x = cc.point()
        F = ev(x)
        if config.check_invariants:
            _check_state(cc, matroid, k, k, violations, "after local search")
            if prev_after is not None and F < prev_after - 1e-9:
                violations.append(f"k={k}: local search lowered F from {prev_after} to {F}")
        comp = complementary_check(f, matroid, cc, cache, config.abs_eps)
        if comp.best_value > comp_v:
            comp_v, comp_s = comp.best_value, comp.best_set
        if k == N:
            records.append(Alg2Record(1.0, F, comp_v, 0.0))
            if observer:
                observer(StepState(k, N, x, F, ev.grad(x), comp, None, None, None, None, cc.copy()))
            break
        g = ev.grad(x)
        graph = build_exchange_graph(f, matroid, cc, k / N, g)
        m = max_weight_matching(graph)
        cc_next = apply_matching(cc, m, graph, matroid)
        x_after = cc_next.point()
        F_after = ev(x_after)
        if config.check_invariants:
            _check_state(cc_next, matroid, k + 1, k + 1, violations, "after matching")
            rises = cc_next.counts - cc.counts
            if rises.max(initial=0) > 1:
                violations.append(f"k={k}: a coordinate rose by more than 1/N")
            if curv is not None:
                slack = n * n * curv / N**2
                if F_after < F + m.weight / N - slack - 1e-9:
                    violations.append(f"k={k}: matching gain below first-order estimate")
        records.append(Alg2Record(k / N, F, comp_v, m.weight))
        if observer:
            observer(StepState(k, N, x, F, g, comp, graph, m, x_after, F_after, cc.copy()))
        prev_after = F_after
        cc = cc_next

    rounded, _log = merge_round(f, matroid, cc)
    rv = f.value(rounded)
    if rv >= comp_v:
        best_v, best_s = rv, rounded
    else:
        best_v, best_s = comp_v, comp_s
    if config.check_invariants and not matroid.is_independent(best_s):
        violations.append("returned set is dependent")
    return Alg2Result(best_v, best_s, rv, rounded, comp_v, comp_s, cc, records, violations)


def _check_state(cc, matroid, k, box, violations, where):
    try:
        cc.validate(matroid)
    except MatroidError as e:
        violations.append(f"k={k} {where}: {e}")
    if cc.counts.max(initial=0) > box:
        violations.append(f"k={k} {where}: coordinate above the box bound")


# -- differential-inequality bounds -----------------------------------------------------------

START_T = (3 - math.sqrt(5)) / 2
START_VALUE = (1 - START_T) / 2


def phi_lower_bound_matroid(t: float, t0: float, v0: float, beta: float) -> float:
    """Lower bound on F(x(t)) given F = v0 at t0 and complementary values <= beta (OPT = 1)."""
    if not t0 < t:
        raise ValueError("need t > t0")
    return 0.5 + beta - 2 * beta * t - (1 - t) ** 2 / (1 - t0) ** 2 * (0.5 + beta - 2 * beta * t0 - v0)


def phi_max_matroid(t0: float, v0: float, beta: float) -> tuple[float, float]:
    """Maximum over t in (t0, 1) of ``phi_lower_bound_matroid``: (argmax t, value)."""
    u0 = 1 - t0
    gap0 = 0.5 + beta - 2 * beta * t0 - v0
    if gap0 <= 0:
        return t0, v0
    u = min(beta * u0**2 / gap0, u0)
    return 1 - u, 0.5 + beta - 2 * beta * (1 - u) - u**2 / u0**2 * gap0


def solve_beta_matroid() -> float:
    """Closed-form guarantee for the matroid annealer (about 0.32559)."""
    r5 = math.sqrt(5)
    return (2 + r5) * (-5 + r5 + math.sqrt(-2 + 6 * r5)) / 8


def fixed_point_residual_matroid(beta: float, t0: float = START_T, v0: float = START_VALUE) -> float:
    return phi_max_matroid(t0, v0, beta)[1] - beta

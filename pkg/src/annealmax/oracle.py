"""Brute-force ground truth and an executable harness for the analysis lemmas."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .anneal import Alg1Config, is_local_opt_at_p, local_search_at_p
from .anneal_matroid import Alg2Config, StepState, run_alg2
from .matroid import ConvexCombination, Matroid
from .multilinear import (
    CLOSED,
    EXACT,
    Evaluator,
    F_batch,
    directional_gain_G,
    grad,
    lovasz_threshold_eval,
    max_second_difference,
    mix_point,
    two_threshold_eval,
)
from .rounding import merge_round
from .setfn import EXHAUSTIVE_N, HypergraphCut, SetFunction, SetFunctionError, full_mask, popcount, to_set

IDENTITY_TOL = 1e-9
INEQUALITY_TOL = 1e-6
BRUTE_FORCE_MAX_N = 24


@dataclass(frozen=True)
class Cardinality:
    k: int
    exact: bool = False


@dataclass(frozen=True)
class Base:
    matroid: Matroid


@dataclass
class BruteForceResult:
    opt: float
    argmax: list[frozenset[int]]
    kind: str
    feasible_count: int

    @property
    def witness(self) -> frozenset[int]:
        return self.argmax[0]


def _kind(constraint) -> str:
    if constraint is None:
        return "unconstrained"
    if isinstance(constraint, Cardinality):
        return f"cardinality {'=' if constraint.exact else '<='} {constraint.k}"
    if isinstance(constraint, Base):
        return "matroid base"
    if isinstance(constraint, Matroid):
        return "matroid"
    raise TypeError(f"unsupported constraint {constraint!r}")


def _feasible(masks: np.ndarray, constraint) -> np.ndarray:
    if constraint is None:
        return np.ones(masks.shape, bool)
    if isinstance(constraint, Cardinality):
        c = popcount(masks)
        return c == constraint.k if constraint.exact else c <= constraint.k
    if isinstance(constraint, Base):
        m = constraint.matroid
        return m.independent_masks(masks) & (popcount(masks) == m.rank())
    return constraint.independent_masks(masks)


def _size_cap(constraint, n: int) -> int:
    if isinstance(constraint, Cardinality):
        return min(constraint.k, n)
    if isinstance(constraint, Base):
        return constraint.matroid.rank()
    if isinstance(constraint, Matroid):
        return constraint.rank()
    return n


def brute_force_max(f: SetFunction, constraint=None) -> BruteForceResult:
    """Exact maximum of f over the feasible family, with every maximizer."""
    n = f.n
    kind = _kind(constraint)
    if n <= EXHAUSTIVE_N:
        masks = np.arange(1 << n, dtype=np.int64)
        masks = masks[_feasible(masks, constraint)]
        vals = f.values(masks)
    elif n <= BRUTE_FORCE_MAX_N and constraint is not None:
        cap = _size_cap(constraint, n)
        lo = cap if isinstance(constraint, Base) or (isinstance(constraint, Cardinality) and constraint.exact) else 0
        chunks = []
        for size in range(lo, cap + 1):
            if size == 0:
                chunks.append(np.zeros(1, np.int64))
                continue
            combos = np.array(list(itertools.combinations(range(n), size)), dtype=np.int64)
            chunks.append((np.int64(1) << combos).sum(axis=1))
        masks = np.concatenate(chunks)
        masks = masks[_feasible(masks, constraint)]
        vals = f.values(masks)
    else:
        raise SetFunctionError(f"brute force over n = {n} is out of reach for constraint {kind}")
    if masks.size == 0:
        raise SetFunctionError("feasible family is empty")
    opt = float(vals.max())
    winners = masks[vals == opt]
    return BruteForceResult(opt, [to_set(int(m)) for m in winners], kind, int(masks.size))


def enumerate_discrete_local_optima(f: SetFunction, p: float, tol: float = 1e-9) -> list[frozenset[int]]:
    """Every A for which x_p(A) passes the gradient sign test."""
    n = f.n
    if n > 12:
        raise SetFunctionError("local-optimum enumeration is limited to n <= 12")
    masks = np.arange(1 << n, dtype=np.int64)
    inside = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    X = np.where(inside, p, 1.0 - p)
    # gradient for every mask: F(x_i = 1) - F(x_i = 0)
    hi = np.repeat(X[:, None, :], n, axis=1)
    lo = hi.copy()
    idx = np.arange(n)
    hi[:, idx, idx] = 1.0
    lo[:, idx, idx] = 0.0
    g = (F_batch(f, hi.reshape(-1, n)) - F_batch(f, lo.reshape(-1, n))).reshape(-1, n)
    if p == 0.5:
        return [to_set(int(m)) for m in masks]
    ok = np.where(inside, g >= -tol, g <= tol).all(axis=1)
    return [to_set(int(m)) for m in masks[ok]]


# -- lemma harness -----------------------------------------------------------------------------


@dataclass
class LemmaCheck:
    name: str
    tol: float
    trials: int = 0
    max_violation: float = -math.inf
    witness: object = None

    def record(self, violation: float, witness=None):
        """``violation`` is the amount by which the inequality fails (<= 0 when it holds)."""
        self.trials += 1
        if violation > self.max_violation:
            self.max_violation = float(violation)
            if violation > self.tol:
                self.witness = witness

    @property
    def passed(self) -> bool:
        return self.trials == 0 or self.max_violation <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        mv = "n/a" if self.trials == 0 else f"{self.max_violation:.3g}"
        return f"{status} {self.name}: trials={self.trials} max_violation={mv} tol={self.tol:g}"


@dataclass
class LemmaReport:
    checks: dict[str, LemmaCheck] = field(default_factory=dict)

    def check(self, name: str, tol: float) -> LemmaCheck:
        if name not in self.checks:
            self.checks[name] = LemmaCheck(name, tol)
        return self.checks[name]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failures(self) -> list[LemmaCheck]:
        return [c for c in self.checks.values() if not c.passed]

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks.values()]

    def merge(self, other: "LemmaReport"):
        for name, c in other.checks.items():
            mine = self.check(name, c.tol)
            if c.trials:
                w = c.witness if c.max_violation > mine.max_violation else mine.witness
                mine.max_violation = max(mine.max_violation, c.max_violation)
                mine.witness = w if mine.max_violation > mine.tol else None
                mine.trials += c.trials


def _naive_F(f: SetFunction, x: np.ndarray) -> float:
    total = 0.0
    for m in range(1 << f.n):
        pr = 1.0
        for i in range(f.n):
            pr *= x[i] if (m >> i) & 1 else 1.0 - x[i]
        total += pr * f.value(m)
    return total


def _extension_checks(f: SetFunction, rng: np.random.Generator, points: int, rep: LemmaReport):
    n = f.n
    a1u = rep.check("submodular change, upper: F(x') <= F(x) + (x'-x).grad F(x)", IDENTITY_TOL)
    a1l = rep.check("submodular change, lower: F(x') >= F(x) + (x'-x).grad F(x')", IDENTITY_TOL)
    a2 = rep.check("second-order remainder", IDENTITY_TOL)
    a3 = rep.check("threshold bound: F(y) >= E f(T_>lam(y))", IDENTITY_TOL)
    a5 = rep.check("two-threshold bound", IDENTITY_TOL)
    ml = rep.check("multilinearity in each coordinate", IDENTITY_TOL)
    fd = rep.check("gradient vs central finite difference", INEQUALITY_TOL)
    ma = rep.check("evaluation mode agreement", IDENTITY_TOL)
    sup = max_second_difference(f)
    d = 0.05
    for _ in range(points):
        x = rng.random(n)
        xp = x + rng.random(n) * (1 - x)
        gx, gxp = grad(f, x), grad(f, xp)
        Fx, Fxp = F_batch(f, np.stack((x, xp)))
        a1u.record(Fxp - Fx - (xp - x) @ gx, (x, xp))
        a1l.record(Fx + (xp - x) @ gxp - Fxp, (x, xp))

        y = rng.uniform(-d, d, n)
        z = np.clip(x + y, 0, 1)
        y = z - x
        rem = abs(F_batch(f, z)[0] - Fx - y @ gx)
        a2.record(rem - (np.abs(y).max() ** 2) * n * n * sup, (x, y))

        a3.record(lovasz_threshold_eval(f, x) - Fx, x)
        part = int(rng.integers(0, 1 << n))
        a5.record(two_threshold_eval(f, x, part) - Fx, (x, part))

        i = int(rng.integers(n))
        s = float(rng.random())
        pts = np.repeat(x[None, :], 3, axis=0)
        pts[0, i], pts[1, i], pts[2, i] = 0.0, 1.0, s
        v0, v1, vs = F_batch(f, pts)
        ml.record(abs(vs - ((1 - s) * v0 + s * v1)), (x, i, s))

        h = 1e-4
        for j in range(n):
            lo_, hi_ = x.copy(), x.copy()
            lo_[j] = max(0.0, x[j] - h)
            hi_[j] = min(1.0, x[j] + h)
            num = (F_batch(f, hi_)[0] - F_batch(f, lo_)[0]) / (hi_[j] - lo_[j])
            fd.record(abs(num - gx[j]), (x, j))

        if n <= 10:
            ma.record(abs(_naive_F(f, x) - Fx), x)
        if isinstance(f, HypergraphCut):
            ma.record(abs(F_batch(f, x, CLOSED)[0] - F_batch(f, x, EXACT)[0]), x)


def _unconstrained_checks(f: SetFunction, opt: float, config: Alg1Config, rep: LemmaReport):
    n = f.n
    sign = rep.check("gradient signs at flip-local optima", IDENTITY_TOL)
    drift = rep.check("drift bound against the brute-force optimum", INEQUALITY_TOL)
    mono = rep.check("annealing trace monotone up to second-order slack", IDENTITY_TOL)
    fmax = float(np.abs(f.table).max())
    ev = Evaluator(f, config.mode)
    a, prev = 0, None
    full = full_mask(n)
    for p in config.grid():
        p = float(p)
        a = local_search_at_p(f, a, p, config, ev)
        ok, cert = is_local_opt_at_p(f, a, p)
        if p > 0.5:
            worst = max((-g if inside else g) for _, inside, g in cert)
            sign.record(worst, (p, sorted(to_set(a))))
        Fa = ev(mix_point(a, p, n))
        if ok and p > 0.5:
            g = np.array([c[2] for c in cert])
            inside = np.array([c[1] for c in cert])
            lhs = (1 - p) * (g[inside].sum() - g[~inside].sum())
            rhs = opt - 2 * Fa - (2 * p - 1) * f.value(full & ~a)
            drift.record(rhs - lhs, (p, sorted(to_set(a))))
        if prev is not None:
            mono.record(prev - Fa - 2 * config.delta**2 * n * n * fmax, p)
        prev = Fa


def _matroid_checks(f: SetFunction, matroid: Matroid, config: Alg2Config, rep: LemmaReport, rng):
    n = f.n
    bf = brute_force_max(f, matroid)
    opt, C = bf.opt, bf.argmax[0]
    cmask = sum(1 << i for i in C)
    sup = max_second_difference(f)
    d1 = rep.check("matching gain", IDENTITY_TOL)
    d2 = rep.check("matching weight >= G(x)/(1-t)", INEQUALITY_TOL)
    d3 = rep.check("optimum direction: G(x) >= OPT - 2F(x) - 2 beta t", INEQUALITY_TOL)
    lm = rep.check("complementary local optima: 2f(S) >= f(S + C_T)", INEQUALITY_TOL)
    rd = rep.check("rounding: f(S) >= F(x)", IDENTITY_TOL)
    inv = rep.check("matroid annealer run invariants", 0.0)
    beta = [-math.inf]
    snapshots: list[ConvexCombination] = []

    def observe(st: StepState):
        beta[0] = max(beta[0], st.complementary.best_value)
        t = st.t
        G = directional_gain_G(f, st.point, cmask)
        d3.record(opt - 2 * st.F - 2 * beta[0] * t - G, t)
        for lam, T, S, v in st.complementary.levels:
            lm.record(f.value(S | (cmask & T)) - 2 * v, (lam, sorted(to_set(T)), sorted(to_set(S))))
        if st.matching is None:
            return
        delta = 1.0 / st.N
        d1.record(st.F + delta * st.matching.weight - n * n * delta**2 * sup - st.F_after, t)
        if t <= 1 - 1 / n and (1 - t) * st.N >= n:
            d2.record(G / (1 - t) - st.matching.weight, t)
        if st.k % max(1, st.N // 8) == 0:
            snapshots.append(st.cc)

    res = run_alg2(f, matroid, config, observer=observe)
    inv.record(float(len(res.violations)), res.violations[:3])
    snapshots.append(res.final)
    # plus a few random combinations of independent sets
    indep = np.flatnonzero(matroid.independent_masks(np.arange(1 << n, dtype=np.int64)))
    for _ in range(4):
        snapshots.append(ConvexCombination(n, [int(m) for m in rng.choice(indep, size=int(rng.integers(1, 9)))]))
    for cc in snapshots:
        S, _ = merge_round(f, matroid, cc)
        rd.record(F_batch(f, cc.point())[0] - f.value(S), sorted(to_set(S)))


def lemma_suite(
    f: SetFunction,
    matroid: Matroid | None = None,
    seeds=(0,),
    points_per_seed: int = 10,
    alg1: Alg1Config | None = None,
    alg2: Alg2Config | None = None,
) -> LemmaReport:
    """Run every lemma check against ``f`` (n <= 10) and report the worst violation of each."""
    if f.n > 10:
        raise SetFunctionError("the lemma suite is limited to n <= 10")
    rep = LemmaReport()
    opt = brute_force_max(f).opt
    for seed in seeds:
        rng = np.random.default_rng(seed)
        _extension_checks(f, rng, points_per_seed, rep)
    _unconstrained_checks(f, opt, alg1 or Alg1Config(), rep)
    if matroid is not None:
        _matroid_checks(f, matroid, alg2 or Alg2Config(), rep, np.random.default_rng(seeds[0] if seeds else 0))
    return rep

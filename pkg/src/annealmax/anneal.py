"""Simulated annealing for unconstrained nonnegative submodular maximization.

The current set A is kept across temperatures; at each p (p = 1 - t, swept
from 1/2 to 1) single-element flips are applied while they raise F(x_p(A)).
The answer is the best f(A) or f(complement of A) ever seen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .multilinear import AUTO, EvalMode, Evaluator, F_eval, grad, mix_point
from .setfn import SetFunction, full_mask, tight_example, to_mask, to_set

LOCAL_OPT_TOL = 1e-9


@dataclass(frozen=True)
class Alg1Config:
    delta: float = 0.01
    p_start: float = 0.5
    p_end: float = 1.0
    ls_eps: float = 1e-9
    abs_eps: float = 1e-12
    mode: EvalMode = AUTO
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.delta <= 0.5:
            raise ValueError(f"delta must lie in (0, 1/2], got {self.delta}")
        if self.ls_eps < 0 or self.abs_eps < 0:
            raise ValueError("local search thresholds must be nonnegative")
        if not 0.5 <= self.p_start <= self.p_end <= 1.0:
            raise ValueError("need 1/2 <= p_start <= p_end <= 1")

    @classmethod
    def asymptotic_schedule(cls, n: int, **kw) -> "Alg1Config":
        return cls(delta=1.0 / n**3, **kw)

    @classmethod
    def frozen_at(cls, p: float, **kw) -> "Alg1Config":
        """Plain local search at a single temperature (p = 2/3 is the classic 2/5 algorithm)."""
        return cls(p_start=p, p_end=p, **kw)

    def grid(self) -> np.ndarray:
        steps = (self.p_end - self.p_start) / self.delta
        k = int(math.floor(steps + 1e-9))
        ps = self.p_start + self.delta * np.arange(k + 1)
        if ps[-1] < self.p_end - 1e-12:
            ps = np.append(ps, self.p_end)
        return np.minimum(ps, self.p_end)


@dataclass
class Alg1Record:
    p: float
    set: int
    F: float
    f_A: float
    f_Acomp: float
    best: float


@dataclass
class Alg1Trace:
    n: int
    records: list[Alg1Record] = field(default_factory=list)
    best_value: float = 0.0
    best_set: int = 0
    flips: int = 0

    @property
    def witness(self) -> frozenset[int]:
        return to_set(self.best_set)

    def offer(self, f: SetFunction, a: int):
        comp = full_mask(self.n) & ~a
        fa, fc = f.value(a), f.value(comp)
        if fa > self.best_value:
            self.best_value, self.best_set = fa, a
        if fc > self.best_value:
            self.best_value, self.best_set = fc, comp
        return fa, fc


def _flip_points(a: int, p: float, n: int) -> np.ndarray:
    x = mix_point(a, p, n)
    pts = np.repeat(x[None, :], n, axis=0)
    idx = np.arange(n)
    pts[idx, idx] = 1.0 - x
    return pts


def local_search_at_p(
    f: SetFunction,
    a0: int,
    p: float,
    config: Alg1Config = Alg1Config(),
    evaluator: Evaluator | None = None,
    trace: Alg1Trace | None = None,
) -> int:
    """Flip the lowest-index improving element until none improves F(x_p(A)) by more
    than ``ls_eps * |F| + abs_eps``."""
    if not 0.5 <= p <= 1.0:
        raise ValueError(f"p must lie in [1/2, 1], got {p}")
    ev = evaluator or Evaluator(f, config.mode)
    n = f.n
    a = to_mask(a0, n)
    cur = ev(mix_point(a, p, n))
    while True:
        vals = ev.batch(_flip_points(a, p, n))
        better = np.flatnonzero(vals > cur + config.ls_eps * abs(cur) + config.abs_eps)
        if better.size == 0:
            return a
        i = int(better[0])
        a ^= 1 << i
        cur = float(vals[i])
        if trace is not None:
            trace.flips += 1
            trace.offer(f, a)


def is_local_opt_at_p(f: SetFunction, a, p: float, tol: float = LOCAL_OPT_TOL, mode: EvalMode = AUTO):
    """Sign test on the gradient at x_p(A): dF/dx_i >= 0 on A, <= 0 off A.

    Returns ``(ok, certificate)``; the certificate lists ``(i, i in A, dF/dx_i)``
    for every element.  At p = 1/2 a flip does not move x_p(A), so every set is
    flip-local and ``ok`` is True whatever the signs.
    """
    n = f.n
    a = to_mask(a, n)
    g = grad(f, mix_point(a, p, n), mode)
    cert = []
    ok = True
    for i in range(n):
        inside = bool((a >> i) & 1)
        cert.append((i, inside, float(g[i])))
        if (inside and g[i] < -tol) or (not inside and g[i] > tol):
            ok = False
    return ok or p == 0.5, cert


def run_alg1(f: SetFunction, config: Alg1Config = Alg1Config(), start: int = 0) -> Alg1Trace:
    ev = Evaluator(f, config.mode)
    trace = Alg1Trace(f.n)
    a = to_mask(start, f.n)
    trace.best_value = -math.inf
    trace.offer(f, a)
    for step, p in enumerate(config.grid()):
        ev.refresh(step)
        a = local_search_at_p(f, a, float(p), config, ev, trace)
        fa, fc = trace.offer(f, a)
        trace.records.append(Alg1Record(float(p), a, ev(mix_point(a, float(p), f.n)), fa, fc, trace.best_value))
    return trace


def random_baseline(f: SetFunction, seed: int = 0) -> tuple[float, int]:
    """Value of a uniformly random set (expected value F(1/2,...,1/2))."""
    rng = np.random.default_rng(seed)
    m = int(((rng.random(f.n) < 0.5) * (1 << np.arange(f.n))).sum())
    return f.value(m), m


# -- the 8-vertex example on which annealing can be held to 17/35 -----------------------------

TIGHT_A = frozenset({1, 3, 5, 7})
TIGHT_OPT = 35.0
TIGHT_F_AT_THREE_QUARTERS = 16.25
TIGHT_BEST = 17.0


class TrajectoryCheckError(AssertionError):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class TrajectoryReport:
    checks: list[Check]
    second_set: frozenset[int] | None
    best_along_trajectory: float
    opt: float

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    @property
    def ratio(self) -> float:
        return self.best_along_trajectory / self.opt if self.opt else float("nan")

    def raise_for_failure(self):
        c = self.first_failure
        if c is not None:
            raise TrajectoryCheckError(f"{c.name}: {c.detail}")


def _pgrid(lo: float, hi: float) -> list[float]:
    return [round(lo + 0.01 * k, 2) for k in range(int(round((hi - lo) / 0.01)) + 1)]


def verify_tight_trajectory(fixture: SetFunction | None = None) -> TrajectoryReport:
    """Certify the adversarial run: A = {1,3,5,7} on p in [1/2, 3/4], then a second
    local optimum B on [3/4, 1], with max{f(A), f(~A), f(B), f(~B)} = 17 against OPT 35.

    B is located by brute force: among sets that are local optima on the whole
    upper grid and tie A at p = 3/4, take the one whose own and complement
    values are smallest.
    """
    f = fixture or tight_example()
    n = f.n
    checks: list[Check] = []
    a = to_mask(TIGHT_A, n)
    low, high = _pgrid(0.5, 0.75), _pgrid(0.75, 1.0)

    bad = [p for p in low if not is_local_opt_at_p(f, a, p)[0]]
    checks.append(Check("A local optimum on [0.50, 0.75]", not bad, f"fails at p={bad[:3]}" if bad else ""))

    fa = F_eval(f, mix_point(a, 0.75, n))
    checks.append(Check("F(x_3/4(A)) = 16.25", fa == TIGHT_F_AT_THREE_QUARTERS, f"got {fa!r}"))

    full = full_mask(n)
    candidates = []
    for b in range(1 << n):
        if b == a:
            continue
        if all(is_local_opt_at_p(f, b, p)[0] for p in high):
            fb = F_eval(f, mix_point(b, 0.75, n))
            if abs(fb - fa) <= 1e-12:
                candidates.append((max(f.value(b), f.value(full & ~b)), b))
    second = min(candidates)[1] if candidates else None
    checks.append(
        Check(
            "second local optimum on [0.75, 1.00] tying A at p=3/4",
            second is not None,
            f"B = {sorted(to_set(second))}" if second is not None else "no candidate",
        )
    )
    vals = [f.value(a), f.value(full & ~a)]
    if second is not None:
        vals += [f.value(second), f.value(full & ~second)]
    best = max(vals)
    checks.append(Check("max{f(A), f(~A), f(B), f(~B)} = 17", best == TIGHT_BEST, f"got {best!r}"))
    opt = float(f.table.max())
    checks.append(Check("OPT = 35", opt == TIGHT_OPT, f"got {opt!r}"))
    return TrajectoryReport(checks, to_set(second) if second is not None else None, best, opt)


# -- differential-inequality bounds -----------------------------------------------------------


def phi_lower_bound(p: float, p0: float, v0: float, beta: float) -> float:
    """Lower bound on F(x_p(A(p))) given F = v0 at p0 and f(~A) <= beta (OPT = 1)."""
    if not p0 < p:
        raise ValueError("need p > p0")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    steady = 0.5 * (1 - beta) + 2 * beta * (1 - p)
    gap0 = 0.5 * (1 - beta) + 2 * beta * (1 - p0) - v0
    return steady - (1 - p) ** 2 / (1 - p0) ** 2 * gap0


def phi_max(p0: float, v0: float, beta: float) -> tuple[float, float]:
    """Maximum of ``phi_lower_bound`` over p in (p0, 1): returns (argmax p, value).

    The bound is a concave quadratic in u = 1 - p when the initial deficit is
    positive; otherwise it is maximized at p -> p0 where it equals v0.
    """
    u0 = 1 - p0
    gap0 = 0.5 * (1 - beta) + 2 * beta * u0 - v0
    if gap0 <= 0:
        return p0, v0
    u = min(beta * u0**2 / gap0, u0)
    return 1 - u, 0.5 * (1 - beta) + 2 * beta * u - u**2 / u0**2 * gap0


def starting_point_bound(q: float, beta: float) -> float:
    """Value guaranteed by a local optimum at p = 1 - q when f(A), f(~A) <= beta (OPT = 1)."""
    if not 1 / 3 - 1e-15 <= q <= 1 / (1 + math.sqrt(2)) + 1e-15:
        raise ValueError(f"q must lie in [1/3, 1/(1+sqrt 2)], got {q}")
    return 0.5 * (1 - q * q) - q * (1 - 2 * q) * beta


BEST_START_P = math.sqrt(2) / (1 + math.sqrt(2))


def solve_beta_unconstrained() -> float:
    """Published closed form for the unconstrained guarantee (about 0.41068)."""
    r2 = math.sqrt(2)
    return (37 + 22 * r2 + (30 * r2 + 14) * math.sqrt(10 - 5 * r2)) / 401


def fixed_point_residual_unconstrained(beta: float, p0: float = BEST_START_P) -> float:
    """max_p phi - beta, with the starting value taken from ``starting_point_bound``."""
    v0 = starting_point_bound(1 - p0, beta)
    return phi_max(p0, v0, beta)[1] - beta


def beta_fixed_point_unconstrained(p0: float = BEST_START_P) -> float:
    """Root of ``fixed_point_residual_unconstrained``: the largest target the bound certifies."""
    return brentq(lambda b: fixed_point_residual_unconstrained(b, p0), 0.3, 0.5, xtol=1e-15)

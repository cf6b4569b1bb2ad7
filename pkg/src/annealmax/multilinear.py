"""Multilinear extension F(x) = E[f(R)], R containing each i independently w.p. x_i.

Three evaluation routes: a closed form for hypergraph cuts, exact enumeration
over all 2^n subsets (n <= 20), and Monte Carlo with a fixed seed.  Everything
here is a pure function of the oracle and the point.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .setfn import EXHAUSTIVE_N, HypergraphCut, SetFunction, SetFunctionError, to_mask

# exact enumeration works on blocks of points so the probability matrix stays small
_EXACT_BLOCK_CELLS = 1 << 22


@dataclass(frozen=True)
class EvalMode:
    kind: str = "auto"  # auto | closed-form | exact | monte-carlo
    samples: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("auto", "closed-form", "exact", "monte-carlo"):
            raise ValueError(f"unknown eval mode {self.kind!r}")
        if self.kind == "monte-carlo" and self.samples < 1:
            raise ValueError("monte-carlo mode needs at least one sample")

    def resolve(self, f: SetFunction) -> str:
        if self.kind != "auto":
            return self.kind
        if isinstance(f, HypergraphCut):
            return "closed-form"
        if f.n <= EXHAUSTIVE_N:
            return "exact"
        return "monte-carlo"


AUTO = EvalMode()
EXACT = EvalMode("exact")
CLOSED = EvalMode("closed-form")


def monte_carlo(samples: int = 10_000, seed: int = 0) -> EvalMode:
    return EvalMode("monte-carlo", samples, seed)


def mix_point(a: int | Iterable[int], p: float, n: int) -> np.ndarray:
    """x_p(A): coordinate p on A and 1-p elsewhere."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    m = to_mask(a, n)
    inside = ((m >> np.arange(n)) & 1).astype(bool)
    return np.where(inside, p, 1.0 - p)


def indicator(s: int | Iterable[int], n: int) -> np.ndarray:
    m = to_mask(s, n)
    return ((m >> np.arange(n)) & 1).astype(float)


def _as_points(x, n: int) -> np.ndarray:
    X = np.atleast_2d(np.asarray(x, dtype=float))
    if X.shape[1] != n:
        raise ValueError(f"point has {X.shape[1]} coordinates, oracle has n={n}")
    if np.any(X < 0.0) or np.any(X > 1.0):
        raise ValueError("point outside [0,1]^n")
    return X


def subset_probabilities(X: np.ndarray) -> np.ndarray:
    """Row b holds Pr[R = S] for every mask S under product distribution X[b]."""
    B, n = X.shape
    P = np.ones((B, 1))
    for i in range(n):
        xi = X[:, i : i + 1]
        P = np.concatenate((P * (1.0 - xi), P * xi), axis=1)
    return P


def _closed_form(f: HypergraphCut, X: np.ndarray) -> np.ndarray:
    out = np.zeros(X.shape[0])
    for e in f.edges:
        miss = np.ones(X.shape[0])
        for u in e.tails:
            miss = miss * (1.0 - X[:, u])
        out += e.weight * (1.0 - miss) * (1.0 - X[:, e.head])
    return out


def _exact(f: SetFunction, X: np.ndarray) -> np.ndarray:
    if f.n > EXHAUSTIVE_N:
        raise SetFunctionError(f"exact enumeration needs n <= {EXHAUSTIVE_N}, got {f.n}")
    table = f.table
    step = max(1, _EXACT_BLOCK_CELLS >> f.n)
    out = np.empty(X.shape[0])
    for s in range(0, X.shape[0], step):
        out[s : s + step] = subset_probabilities(X[s : s + step]) @ table
    return out


def uniforms(n: int, samples: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).random((samples, n))


def _sampled(f: SetFunction, X: np.ndarray, U: np.ndarray):
    """Mean and standard error of f(R) with R = {i : U_i < x_i}, same U for every point."""
    weights = (np.int64(1) << np.arange(f.n, dtype=np.int64))
    means = np.empty(X.shape[0])
    errs = np.empty(X.shape[0])
    for b, x in enumerate(X):
        masks = ((U < x) * weights).sum(axis=1)
        v = f.values(masks)
        means[b] = v.mean()
        errs[b] = v.std(ddof=1) / np.sqrt(len(v)) if len(v) > 1 else float("inf")
    return means, errs


def F_batch(f: SetFunction, X, mode: EvalMode = AUTO) -> np.ndarray:
    X = _as_points(X, f.n)
    kind = mode.resolve(f)
    if kind == "closed-form":
        if not isinstance(f, HypergraphCut):
            raise SetFunctionError(f"closed form is only available for cut functions, not {f.kind}")
        return _closed_form(f, X)
    if kind == "exact":
        return _exact(f, X)
    return _sampled(f, X, uniforms(f.n, mode.samples, mode.seed))[0]


def F_eval(f: SetFunction, x, mode: EvalMode = AUTO) -> float:
    return float(F_batch(f, x, mode)[0])


def F_monte_carlo(f: SetFunction, x, samples: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """Unbiased estimate of F(x) and its standard error."""
    X = _as_points(x, f.n)
    m, e = _sampled(f, X, uniforms(f.n, samples, seed))
    return float(m[0]), float(e[0])


def _grad_points(x: np.ndarray) -> np.ndarray:
    n = len(x)
    pts = np.repeat(x[None, :], 2 * n, axis=0)
    idx = np.arange(n)
    pts[idx, idx] = 1.0
    pts[n + idx, idx] = 0.0
    return pts


def grad(f: SetFunction, x, mode: EvalMode = AUTO) -> np.ndarray:
    """dF/dx_i = F(x | x_i=1) - F(x | x_i=0); exact since F is affine in each coordinate."""
    x = _as_points(x, f.n)[0]
    vals = F_batch(f, _grad_points(x), mode)
    return vals[: f.n] - vals[f.n :]


def mixed_partial(f: SetFunction, x, i: int, j: int, mode: EvalMode = AUTO) -> float:
    if i == j:
        raise ValueError("mixed partial needs i != j")
    x = _as_points(x, f.n)[0]
    pts = np.repeat(x[None, :], 4, axis=0)
    for r, (a, b) in enumerate(((1, 1), (1, 0), (0, 1), (0, 0))):
        pts[r, i], pts[r, j] = a, b
    v = F_batch(f, pts, mode)
    return float(v[0] - v[1] - v[2] + v[3])


def hessian(f: SetFunction, x, mode: EvalMode = AUTO) -> np.ndarray:
    """Matrix of mixed partials with zero diagonal (F is multilinear)."""
    x = _as_points(x, f.n)[0]
    n = f.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    H = np.zeros((n, n))
    if not pairs:
        return H
    pts = np.repeat(x[None, :], 4 * len(pairs), axis=0)
    for k, (i, j) in enumerate(pairs):
        for r, (a, b) in enumerate(((1, 1), (1, 0), (0, 1), (0, 0))):
            pts[4 * k + r, i], pts[4 * k + r, j] = a, b
    v = F_batch(f, pts, mode).reshape(-1, 4)
    d = v[:, 0] - v[:, 1] - v[:, 2] + v[:, 3]
    for (i, j), h in zip(pairs, d):
        H[i, j] = H[j, i] = h
    return H


def max_second_difference(f: SetFunction) -> float:
    """max |f(S+i+j) - f(S+i) - f(S+j) + f(S)|, which bounds sup |d2F/dxi dxj|."""
    t = f.table
    masks = np.arange(1 << f.n, dtype=np.int64)
    best = 0.0
    for i in range(f.n):
        for j in range(i + 1, f.n):
            bi, bj = 1 << i, 1 << j
            s = masks[(masks & (bi | bj)) == 0]
            d = np.abs(t[s | bi | bj] - t[s | bi] - t[s | bj] + t[s])
            best = max(best, float(d.max()))
    return best


def _level_sets(y: np.ndarray):
    """(measure, mask) pairs: T_{>lam}(y) for lam uniform on [0,1]."""
    levels = np.unique(np.concatenate(([0.0, 1.0], y)))
    out = []
    for lo, hi in zip(levels[:-1], levels[1:]):
        m = 0
        for i in np.flatnonzero(y > lo):
            m |= 1 << int(i)
        out.append((float(hi - lo), m))
    return out


def lovasz_threshold_eval(f: SetFunction, y) -> float:
    """E_lam[f(T_{>lam}(y))] with lam ~ U[0,1], computed exactly from the level sets."""
    y = _as_points(y, f.n)[0]
    return float(sum(w * f.value(m) for w, m in _level_sets(y) if w > 0))


def two_threshold_eval(f: SetFunction, y, part: int | Iterable[int]) -> float:
    """E[f((T_{>l1}(y) & X1) | (T_{>l2}(y) & X2))] for independent uniform l1, l2.

    ``part`` is X1; X2 is its complement.
    """
    y = _as_points(y, f.n)[0]
    x1 = to_mask(part, f.n)
    x2 = ((1 << f.n) - 1) & ~x1
    total = 0.0
    for w1, m1 in _level_sets(y):
        if w1 <= 0:
            continue
        for w2, m2 in _level_sets(y):
            if w2 > 0:
                total += w1 * w2 * f.value((m1 & x1) | (m2 & x2))
    return total


def directional_gain_G(f: SetFunction, x, c: int | Iterable[int], mode: EvalMode = AUTO) -> float:
    """(1_C - x) . grad F(x): the derivative of F moving from x towards 1_C."""
    x = _as_points(x, f.n)[0]
    return float((indicator(c, f.n) - x) @ grad(f, x, mode))


class Evaluator:
    """Batch evaluation of F with common random numbers in Monte Carlo mode.

    ``refresh(step)`` redraws the uniform sample matrix from (seed, step), so
    all comparisons made between two refreshes share the same randomness.
    """

    def __init__(self, f: SetFunction, mode: EvalMode = AUTO):
        self.f = f
        self.mode = mode
        self.kind = mode.resolve(f)
        self._U = None
        if self.kind == "monte-carlo":
            self.refresh(0)

    def refresh(self, step: int):
        if self.kind == "monte-carlo":
            ss = np.random.SeedSequence([self.mode.seed, step])
            self._U = np.random.default_rng(ss).random((self.mode.samples, self.f.n))

    def batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.kind == "closed-form":
            return _closed_form(self.f, X)
        if self.kind == "exact":
            return _exact(self.f, X)
        return _sampled(self.f, X, self._U)[0]

    def __call__(self, x) -> float:
        return float(self.batch(x)[0])

    def grad(self, x) -> np.ndarray:
        vals = self.batch(_grad_points(np.asarray(x, dtype=float)))
        n = self.f.n
        return vals[:n] - vals[n:]

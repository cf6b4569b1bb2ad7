"""Symmetric hard instances and their symmetry gaps.

Element layout for the two-hyperedge instances with k tails per edge:
heads a = 0, b = 1; tails of a at 2..k+1; tails of b at k+2..2k+1.
The symmetry group swaps the two hyperedges and rotates tails, so a
symmetrized point is constant on the heads and constant on the tails.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matroid import PartitionMatroid, UniformMatroid
from .multilinear import CLOSED, EXACT, EvalMode, F_eval
from .setfn import EXHAUSTIVE_N, DirectedHyperedge, HypergraphCut

GOLDEN_TOL = 1e-10
E_HALF = 1 - math.exp(-0.5)


@dataclass
class GapReport:
    opt: float
    gap_value: float
    method: str  # closed-form | numeric
    args: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"opt": self.opt, "gap_value": self.gap_value, "method": self.method, "args": dict(self.args)}


def golden_section(fn, lo: float, hi: float, maximize: bool = False, tol: float = GOLDEN_TOL):
    """Extremum of a unimodal function on [lo, hi]; returns (argument, value)."""
    sgn = -1.0 if maximize else 1.0
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = sgn * fn(c), sgn * fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sgn * fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sgn * fn(d)
    x = (a + b) / 2
    return x, fn(x)


# -- instances --------------------------------------------------------------------------------


def _layout(k: int):
    if k < 1:
        raise ValueError("k must be at least 1")
    heads = (0, 1)
    tails_a = tuple(range(2, k + 2))
    tails_b = tuple(range(k + 2, 2 * k + 2))
    return heads, tails_a, tails_b


def _two_edge_cut(k: int, alpha: float) -> HypergraphCut:
    (a, b), ta, tb = _layout(k)
    edges = [DirectedHyperedge(frozenset(ta), a, alpha), DirectedHyperedge(frozenset(tb), b, alpha)]
    if alpha < 1:
        edges += [DirectedHyperedge(frozenset({a}), b, 1 - alpha), DirectedHyperedge(frozenset({b}), a, 1 - alpha)]
    return HypergraphCut(2 * k + 2, tuple(edges))


def _head_tail_matroid(k: int) -> PartitionMatroid:
    heads, ta, tb = _layout(k)
    return PartitionMatroid(2 * k + 2, (frozenset(heads), frozenset(ta + tb)), (1, 1))


def build_instance1(k: int):
    """Two unit hyperedges; at most one head and one tail (bases: exactly one of each)."""
    return _two_edge_cut(k, 1.0), _head_tail_matroid(k)


def build_instance2(k: int, alpha: float):
    """Hyperedges of weight alpha plus the undirected edge {a, b} of weight 1 - alpha."""
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    return _two_edge_cut(k, alpha), _head_tail_matroid(k)


def build_cardinality_instance(k: int, alpha: float, budget: int = 2):
    f, _ = build_instance2(k, alpha)
    return f, UniformMatroid(f.n, budget)


def build_base_instance(ell: int, k: int):
    """ell hyperedges with k tails each; heads occupy 0..ell-1.

    Feasible sets take ell-1 heads and one tail (the base constraint).
    """
    if ell < 2 or k < 1:
        raise ValueError("need ell >= 2 and k >= 1")
    n = ell + ell * k
    edges = []
    for h in range(ell):
        tails = frozenset(range(ell + h * k, ell + (h + 1) * k))
        edges.append(DirectedHyperedge(tails, h, 1.0))
    matroid = PartitionMatroid(n, (frozenset(range(ell)), frozenset(range(ell, n))), (ell - 1, 1))
    return HypergraphCut(n, tuple(edges)), matroid


def symmetrize(x, heads: int = 2) -> np.ndarray:
    """Average over the instance's symmetry group: heads to their mean, tails to theirs."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[:heads] = x[:heads].mean()
    out[heads:] = x[heads:].mean() if x.size > heads else 0.0
    return out


# -- gaps --------------------------------------------------------------------------------------


def _escape(k: int | None, share: float) -> float:
    """Probability at least one of k tails is chosen when they carry total mass ``share``."""
    return 1 - math.exp(-share) if k is None else 1 - (1 - share / k) ** k


def gap_instance1(k: int | None = None) -> GapReport:
    """Value at the unique symmetric base point (1/2, 1/2, 1/2k, ...); k=None is the limit."""
    val = _escape(k, 0.5)
    return GapReport(1.0, val, "closed-form", {"k": k})


def gap_base_ell(ell: int, k: int | None = None) -> GapReport:
    if ell < 2:
        raise ValueError("ell must be at least 2")
    return GapReport(1.0, _escape(k, 1.0 / ell), "closed-form", {"ell": ell, "k": k})


def symmetric_value_instance2(k: int | None, alpha: float, q: float) -> float:
    """F at the symmetric point with head mass q each and full tail mass 1/2k each."""
    return 2 * alpha * (1 - q) * _escape(k, 0.5) + 2 * (1 - alpha) * q * (1 - q)


def gap_instance2(alpha: float, k: int | None = None) -> GapReport:
    """max over q in [0, 1/2]: concave quadratic, maximized in closed form."""
    E = _escape(k, 0.5)
    if alpha >= 1:
        q = 0.0
    else:
        q = min(max(0.5 - alpha * E / (2 * (1 - alpha)), 0.0), 0.5)
    return GapReport(1.0, symmetric_value_instance2(k, alpha, q), "closed-form", {"alpha": alpha, "q": q, "k": k})


def min_gap_instance2(k: int | None = None) -> tuple[float, float]:
    """(alpha*, gamma): the alpha making the symmetric optimum smallest."""
    return golden_section(lambda a: gap_instance2(a, k).gap_value, 0.0, 1.0)


def symmetric_value_cardinality(k: int | None, alpha: float, z: float) -> float:
    """F at the symmetric point with heads 1 - z and total tail mass z per edge (budget 2)."""
    esc = 1 - math.exp(-z) if k is None else 1 - (1 - z / k) ** k
    return 2 * alpha * z * esc + 2 * (1 - alpha) * z * (1 - z)


def gap_cardinality(alpha: float, k: int | None = None) -> GapReport:
    z, v = golden_section(lambda z: symmetric_value_cardinality(k, alpha, z), 0.0, 1.0, maximize=True)
    return GapReport(1.0, v, "numeric", {"alpha": alpha, "z": z, "k": k})


def min_gap_cardinality(k: int | None = None) -> tuple[float, float]:
    return golden_section(lambda a: gap_cardinality(a, k).gap_value, 0.0, 1.0)


# -- cross-checks against the extension itself ------------------------------------------------


def instance1_symmetric_point(k: int) -> np.ndarray:
    return symmetrize(np.eye(2 * k + 2)[0] + np.eye(2 * k + 2)[k + 2])


def evaluate_gap_instance1(k: int, mode: EvalMode = CLOSED) -> float:
    f, _ = build_instance1(k)
    return F_eval(f, instance1_symmetric_point(k), mode)


def evaluate_gap_base_ell(ell: int, k: int, mode: EvalMode = CLOSED) -> float:
    f, _ = build_base_instance(ell, k)
    x = np.concatenate((np.full(ell, (ell - 1) / ell), np.full(ell * k, 1.0 / (ell * k))))
    return F_eval(f, x, mode)


def evaluate_instance2(k: int, alpha: float, q: float, mode: EvalMode = CLOSED) -> float:
    f, _ = build_instance2(k, alpha)
    x = np.concatenate(([q, q], np.full(2 * k, 1.0 / (2 * k))))
    return F_eval(f, x, mode)


def cross_check_modes(k: int) -> list[EvalMode]:
    """Evaluation routes usable for an instance with k tails per edge."""
    return [CLOSED, EXACT] if 2 * k + 2 <= EXHAUSTIVE_N else [CLOSED]


@dataclass
class ExponentReport:
    ks: list[int]
    escape: list[float]  # measured tail-escape probability at each k
    limit: float  # extrapolated k -> infinity
    candidates: dict[str, float]
    supported: str

    def to_dict(self) -> dict:
        return {
            "ks": self.ks,
            "escape": self.escape,
            "limit": self.limit,
            "candidates": self.candidates,
            "supported": self.supported,
        }


def exponent_check(ks=(8, 9, 10, 11, 12)) -> ExponentReport:
    """Measure the tail-escape factor of the second instance from the extension.

    Setting q = 0 and alpha = 1/2 leaves F = escape(k), read off by evaluating F
    at the symmetrized point.  escape(k) = L + c/k + O(1/k^2), so two-point
    Richardson extrapolation estimates L, which is compared against 1 - e^{-1/2}
    (tails at 1/2k) and 1 - e^{-1} (tails at 1/k).
    """
    ks = list(ks)
    esc = [evaluate_instance2(k, 0.5, 0.0) for k in ks]
    k1, k2 = ks[-2], ks[-1]
    limit = (k2 * esc[-1] - k1 * esc[-2]) / (k2 - k1)
    cands = {"exp(-1/2)": E_HALF, "exp(-1)": 1 - math.exp(-1)}
    supported = min(cands, key=lambda c: abs(cands[c] - limit))
    return ExponentReport(ks, esc, limit, cands, supported)

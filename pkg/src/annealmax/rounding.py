"""Lossless rounding of a convex combination of independent sets.

Two member sets I, J (weights a/N and b/N) are merged one exchange at a time.
Each exchange moves the point along e_i - e_j, a direction in which F is
convex for submodular f, so the better endpoint is never worse than the start.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matroid import ConvexCombination, Matroid, MatroidError
from .multilinear import AUTO, EvalMode, Evaluator, mixed_partial


@dataclass
class MergeStep:
    pair: tuple[int, int]  # masks of the two merged sets, as they were before the merge
    exchanges: list[tuple[int | None, int | None, str]] = field(default_factory=list)  # (i, j, side kept)
    F_before: float = 0.0
    F_after: float = 0.0


def _bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def _exchange(matroid: Matroid, I: int, J: int):
    """One elementary exchange making I and J closer.

    Returns (i, j) with i in I - J or None, j in J - I or None such that
    both I - i + j and J - j + i are independent.
    """
    for i in _bits(I & ~J):
        if matroid.is_independent(J | (1 << i)):
            return i, None
    for j in _bits(J & ~I):
        if matroid.is_independent(I | (1 << j)):
            return None, j
    for i in _bits(I & ~J):
        for j in _bits(J & ~I):
            if matroid.is_independent((I & ~(1 << i)) | (1 << j)) and matroid.is_independent(
                (J & ~(1 << j)) | (1 << i)
            ):
                return i, j
    raise MatroidError("no symmetric exchange between two independent sets")


def _edit(S: int, drop: int | None, add: int | None) -> int:
    if drop is not None:
        S &= ~(1 << drop)
    if add is not None:
        S |= 1 << add
    return S


def merge_round(
    f,
    matroid: Matroid,
    cc: ConvexCombination,
    mode: EvalMode = AUTO,
    check_convexity: bool = False,
) -> tuple[int, list[MergeStep]]:
    """Collapse ``cc`` to one independent set S with f(S) >= F(point of cc)."""
    cc.validate(matroid)
    ev = Evaluator(f, mode)
    n, N = cc.n, cc.N
    # group identical sets: blocks of (mask, multiplicity)
    blocks: dict[int, int] = {}
    for s in cc.sets:
        blocks[s] = blocks.get(s, 0) + 1
    items = [[m, c] for m, c in blocks.items()]
    log: list[MergeStep] = []

    def point():
        x = np.zeros(n)
        for m, c in items:
            for i in _bits(m):
                x[i] += c
        return x / N

    while len(items) > 1:
        (I, a), (J, b) = items[0], items[1]
        step = MergeStep((I, J), F_before=ev(point()))
        while I != J:
            i, j = _exchange(matroid, I, J)
            if check_convexity and i is not None and j is not None:
                h = mixed_partial(f, point(), i, j, mode)
                if h > 1e-12:
                    raise AssertionError(f"positive mixed partial {h} on pair ({i}, {j})")
            # candidate 1: J takes I's version; candidate 2: I takes J's version
            I2, J2 = I, _edit(J, j, i)
            I3, J3 = _edit(I, i, j), J
            items[0][0], items[1][0] = I2, J2
            v2 = ev(point())
            items[0][0], items[1][0] = I3, J3
            v3 = ev(point())
            if v2 >= v3:
                I, J, side = I2, J2, "first"
            else:
                I, J, side = I3, J3, "second"
            items[0][0], items[1][0] = I, J
            step.exchanges.append((i, j, side))
        items[0][1] = a + b
        del items[1]
        step.F_after = ev(point())
        log.append(step)
    S = items[0][0]
    if not matroid.is_independent(S):
        raise MatroidError("rounded set is dependent")
    return S, log

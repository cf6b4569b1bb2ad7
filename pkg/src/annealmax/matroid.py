"""Matroid oracles and the convex-combination representation used by the matroid annealer."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .setfn import popcount, to_mask


class MatroidError(ValueError):
    pass


class _Empty:
    """The formal extra element whose partial derivative is identically 0."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "EMPTY"

    def __reduce__(self):
        return (_Empty, ())


EMPTY = _Empty()


class Matroid:
    n: int
    kind = "abstract"

    def is_independent(self, s: int | Iterable[int]) -> bool:
        raise NotImplementedError

    def independent_masks(self, masks: np.ndarray) -> np.ndarray:
        return np.array([self.is_independent(int(m)) for m in masks], dtype=bool)

    def rank(self) -> int:
        """Size of a maximal independent set (greedy is exact for matroids)."""
        s = 0
        for i in range(self.n):
            if self.is_independent(s | (1 << i)):
                s |= 1 << i
        return bin(s).count("1")

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class UniformMatroid(Matroid):
    n: int
    k: int
    kind = "uniform"

    def __post_init__(self):
        if self.k < 0:
            raise MatroidError("uniform matroid rank must be nonnegative")

    def is_independent(self, s):
        return bin(to_mask(s, self.n)).count("1") <= self.k

    def independent_masks(self, masks):
        return popcount(masks) <= self.k

    def rank(self):
        return min(self.k, self.n)

    def to_dict(self):
        return {"kind": self.kind, "k": self.k}


@dataclass(frozen=True, eq=False)
class PartitionMatroid(Matroid):
    """At most ``caps[b]`` elements from block b.  Elements in no block are unconstrained."""

    n: int
    blocks: tuple[frozenset[int], ...]
    caps: tuple[int, ...]
    kind = "partition"

    def __post_init__(self):
        blocks = tuple(frozenset(int(i) for i in b) for b in self.blocks)
        caps = tuple(int(c) for c in self.caps)
        if len(blocks) != len(caps):
            raise MatroidError("need one capacity per block")
        seen = 0
        for b in blocks:
            m = to_mask(b, self.n)
            if m & seen:
                raise MatroidError("partition blocks overlap")
            seen |= m
        if any(c < 0 for c in caps):
            raise MatroidError("negative block capacity")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "_block_masks", tuple(to_mask(b) for b in blocks))

    def is_independent(self, s):
        m = to_mask(s, self.n)
        return all(bin(m & bm).count("1") <= c for bm, c in zip(self._block_masks, self.caps))

    def independent_masks(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        ok = np.ones(masks.shape, dtype=bool)
        for bm, c in zip(self._block_masks, self.caps):
            ok &= popcount(masks & bm) <= c
        return ok

    def to_dict(self):
        return {"kind": self.kind, "blocks": [sorted(b) for b in self.blocks], "caps": list(self.caps)}


@dataclass(frozen=True, eq=False)
class PredicateMatroid(Matroid):
    """Wraps an arbitrary independence predicate on masks.  Axioms are the caller's problem."""

    n: int
    predicate: Callable[[int], bool]
    kind = "predicate"

    def is_independent(self, s):
        return bool(self.predicate(to_mask(s, self.n)))

    def to_dict(self):
        raise MatroidError("predicate matroids cannot be serialized")


def matroid_from_dict(d: dict, n: int) -> Matroid:
    kind = d.get("kind")
    if kind == "uniform":
        return UniformMatroid(n, int(d["k"]))
    if kind == "partition":
        return PartitionMatroid(n, tuple(frozenset(b) for b in d["blocks"]), tuple(d["caps"]))
    raise MatroidError(f"unknown matroid kind {kind!r}")


def exchange_candidate(matroid: Matroid, independent: int, i: int, gradient: Sequence[float]):
    """b(i): the cheapest j in I + {EMPTY} with I - j + i independent.

    EMPTY has gradient 0 and wins ties; remaining ties go to the lowest index.
    """
    if (independent >> i) & 1:
        raise MatroidError(f"element {i} already in the independent set")
    best, best_g = None, None
    if matroid.is_independent(independent | (1 << i)):
        best, best_g = EMPTY, 0.0
    j, rest = 0, independent
    while rest:
        if rest & 1:
            cand = (independent & ~(1 << j)) | (1 << i)
            g = float(gradient[j])
            if (best is None or g < best_g) and matroid.is_independent(cand):
                best, best_g = j, g
        rest >>= 1
        j += 1
    if best is None:
        raise MatroidError(f"no exchange partner for {i}: oracle violates the exchange axiom")
    return best


def exchange_weight(gradient: Sequence[float], i: int, b) -> float:
    return float(gradient[i]) - (0.0 if b is EMPTY else float(gradient[b]))


@dataclass
class ConvexCombination:
    """x = (1/N) * sum of indicator vectors of N independent sets (kept as masks).

    ``counts[i]`` is the number of member sets containing i; it is the exact
    integer numerator of x_i and is kept in sync by ``replace``.
    """

    n: int
    sets: list[int]
    counts: np.ndarray = field(init=False)

    def __post_init__(self):
        self.sets = [int(s) for s in self.sets]
        if not self.sets:
            raise MatroidError("a convex combination needs at least one member set")
        self.counts = self._recount()

    @classmethod
    def empty(cls, n: int, N: int) -> "ConvexCombination":
        return cls(n, [0] * N)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int] | int]) -> "ConvexCombination":
        return cls(n, [to_mask(s, n) for s in sets])

    @property
    def N(self) -> int:
        return len(self.sets)

    def _recount(self) -> np.ndarray:
        c = np.zeros(self.n, dtype=np.int64)
        bits = np.arange(self.n)
        for s in self.sets:
            c += (s >> bits) & 1
        return c

    def point(self) -> np.ndarray:
        return self.counts / self.N

    def replace(self, ell: int, new: int):
        old = self.sets[ell]
        bits = np.arange(self.n)
        self.counts += ((new >> bits) & 1) - ((old >> bits) & 1)
        self.sets[ell] = int(new)

    def copy(self) -> "ConvexCombination":
        return ConvexCombination(self.n, list(self.sets))

    def validate(self, matroid: Matroid):
        for ell, s in enumerate(self.sets):
            if not matroid.is_independent(s):
                raise MatroidError(f"member set {ell} is dependent")
        if not np.array_equal(self.counts, self._recount()):
            raise MatroidError("cached membership counts out of sync")

    def to_dict(self) -> dict:
        return {"n": self.n, "sets": [sorted(_bits(s)) for s in self.sets]}

    @classmethod
    def from_dict(cls, d: dict) -> "ConvexCombination":
        return cls.from_sets(int(d["n"]), d["sets"])


def _bits(m: int) -> list[int]:
    return [i for i in range(m.bit_length()) if (m >> i) & 1]


def combination_point(cc: ConvexCombination) -> np.ndarray:
    return cc.point()


def in_boxed_polytope(cc: ConvexCombination, t: float) -> bool:
    """Membership in P_t(M); the matroid polytope part holds by construction."""
    return bool(cc.point().max(initial=0.0) <= t + 1e-12)

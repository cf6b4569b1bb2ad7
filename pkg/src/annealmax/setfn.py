"""Set functions over small ground sets.

Subsets of the ground set ``{0, ..., n-1}`` are passed around as integer
bitmasks (bit ``i`` set iff element ``i`` is in the set).  Every oracle exposes
``value`` for a single mask and ``values`` for a numpy array of masks, the
latter being what the multilinear machinery uses.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

MAX_N = 30
EXHAUSTIVE_N = 20


class SetFunctionError(ValueError):
    pass


def to_mask(s: int | Iterable[int], n: int | None = None) -> int:
    """Convert an iterable of element indices (or a mask) to a bitmask."""
    if isinstance(s, (int, np.integer)):
        m = int(s)
        if m < 0 or (n is not None and m >> n):
            raise SetFunctionError(f"mask {m:#x} outside ground set of size {n}")
        return m
    m = 0
    for i in s:
        i = int(i)
        if i < 0 or (n is not None and i >= n):
            raise SetFunctionError(f"element {i} outside ground set of size {n}")
        m |= 1 << i
    return m


def to_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(masks, dtype=np.int64)).astype(np.int64)


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class DirectedHyperedge:
    tails: frozenset[int]
    head: int
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "tails", frozenset(int(t) for t in self.tails))
        if not self.tails:
            raise SetFunctionError("hyperedge needs a nonempty tail set")
        if self.head in self.tails:
            raise SetFunctionError(f"head {self.head} also listed as a tail")
        if self.weight < 0:
            raise SetFunctionError(f"negative hyperedge weight {self.weight}")

    @property
    def tail_mask(self) -> int:
        return to_mask(self.tails)


class SetFunction:
    """Base class for value oracles.  Subclasses implement ``values``."""

    kind = "abstract"
    n: int

    def values(self, masks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, s: int | Iterable[int]) -> float:
        m = to_mask(s, self.n)
        return float(self.values(np.array([m], dtype=np.int64))[0])

    def __call__(self, s: int | Iterable[int]) -> float:
        return self.value(s)

    @cached_property
    def table(self) -> np.ndarray:
        """All 2^n values, indexed by mask (n <= 20)."""
        if self.n > EXHAUSTIVE_N:
            raise SetFunctionError(f"value table needs n <= {EXHAUSTIVE_N}, got {self.n}")
        t = self.values(np.arange(1 << self.n, dtype=np.int64))
        t.setflags(write=False)
        return t

    @cached_property
    def max_value(self) -> float:
        return float(self.table.max())

    def _check_nonnegative(self):
        if self.n <= EXHAUSTIVE_N:
            lo = float(self.table.min())
            if lo < 0:
                bad = int(np.argmin(self.table))
                raise SetFunctionError(f"f({sorted(to_set(bad))}) = {lo} < 0")

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class HypergraphCut(SetFunction):
    """Weighted cut function of a directed hypergraph.

    A hyperedge ``(U, v)`` is cut by ``S`` iff ``U & S`` is nonempty and
    ``v`` is not in ``S``.
    """

    n: int
    edges: tuple[DirectedHyperedge, ...] = ()
    kind = "hypergraph-cut"

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "edges", tuple(self.edges))
        for e in self.edges:
            if e.head >= self.n or max(e.tails) >= self.n or min(e.tails) < 0 or e.head < 0:
                raise SetFunctionError(f"hyperedge {e} outside ground set of size {self.n}")

    @classmethod
    def from_digraph(cls, n: int, arcs: Iterable[tuple[int, int, float]]) -> "HypergraphCut":
        return cls(n, tuple(DirectedHyperedge(frozenset([u]), v, w) for u, v, w in arcs))

    def values(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=float)
        for e in self.edges:
            cut = ((masks & e.tail_mask) != 0) & (((masks >> e.head) & 1) == 0)
            out += e.weight * cut
        return out

    @property
    def total_weight(self) -> float:
        return float(sum(e.weight for e in self.edges))

    def with_weight(self, index: int, weight: float) -> "HypergraphCut":
        e = self.edges[index]
        edges = list(self.edges)
        edges[index] = DirectedHyperedge(e.tails, e.head, weight)
        return HypergraphCut(self.n, tuple(edges))

    def to_dict(self):
        return {
            "n": self.n,
            "kind": self.kind,
            "edges": [
                {"tails": sorted(e.tails), "head": e.head, "w": _num(e.weight)} for e in self.edges
            ],
        }


@dataclass(frozen=True, eq=False)
class TableFunction(SetFunction):
    """Explicit value table of length 2^n, indexed by mask.  f(empty) may be positive."""

    n: int
    table_values: tuple[float, ...] = ()
    kind = "table"

    def __post_init__(self):
        if self.n > EXHAUSTIVE_N:
            raise SetFunctionError(f"table oracles need n <= {EXHAUSTIVE_N}")
        _check_n(self.n)
        vals = tuple(float(v) for v in self.table_values)
        if len(vals) != 1 << self.n:
            raise SetFunctionError(f"table needs {1 << self.n} entries, got {len(vals)}")
        object.__setattr__(self, "table_values", vals)
        self._check_nonnegative()

    @classmethod
    def from_dict_of_sets(cls, n: int, values: dict) -> "TableFunction":
        t = [0.0] * (1 << n)
        for s, v in values.items():
            t[to_mask(s, n)] = v
        return cls(n, tuple(t))

    @cached_property
    def _arr(self):
        return np.array(self.table_values, dtype=float)

    def values(self, masks):
        return self._arr[np.asarray(masks, dtype=np.int64)]

    def to_dict(self):
        return {"n": self.n, "kind": self.kind, "values": [_num(v) for v in self.table_values]}


@dataclass(frozen=True, eq=False)
class ModularFunction(SetFunction):
    """f(S) = offset + sum of weights over S."""

    n: int
    weights: tuple[float, ...] = ()
    offset: float = 0.0
    kind = "modular"

    def __post_init__(self):
        _check_n(self.n)
        w = tuple(float(v) for v in self.weights)
        if len(w) != self.n:
            raise SetFunctionError(f"need {self.n} weights, got {len(w)}")
        object.__setattr__(self, "weights", w)
        if self.offset + sum(min(v, 0.0) for v in w) < 0:
            raise SetFunctionError("modular function takes negative values")

    def values(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        out = np.full(masks.shape, float(self.offset))
        for i, w in enumerate(self.weights):
            out += w * ((masks >> i) & 1)
        return out

    def to_dict(self):
        return {
            "n": self.n,
            "kind": self.kind,
            "weights": [_num(v) for v in self.weights],
            "offset": _num(self.offset),
        }


@dataclass(frozen=True, eq=False)
class CoverageFunction(SetFunction):
    """Weighted coverage: element i covers ``covers[i]``; f(S) is the covered item weight."""

    n: int
    covers: tuple[frozenset[int], ...] = ()
    item_weights: tuple[float, ...] = ()
    kind = "coverage"

    def __post_init__(self):
        _check_n(self.n)
        covers = tuple(frozenset(int(u) for u in c) for c in self.covers)
        if len(covers) != self.n:
            raise SetFunctionError(f"need {self.n} cover lists, got {len(covers)}")
        iw = tuple(float(v) for v in self.item_weights)
        if any(v < 0 for v in iw):
            raise SetFunctionError("negative item weight")
        for c in covers:
            if c and (max(c) >= len(iw) or min(c) < 0):
                raise SetFunctionError("cover list references unknown item")
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "item_weights", iw)

    @cached_property
    def _coverers(self) -> list[int]:
        # item -> mask of elements covering it
        m = [0] * len(self.item_weights)
        for i, c in enumerate(self.covers):
            for u in c:
                m[u] |= 1 << i
        return m

    def values(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        out = np.zeros(masks.shape, dtype=float)
        for cm, w in zip(self._coverers, self.item_weights):
            if cm:
                out += w * ((masks & cm) != 0)
        return out

    def to_dict(self):
        return {
            "n": self.n,
            "kind": self.kind,
            "covers": [sorted(c) for c in self.covers],
            "item_weights": [_num(v) for v in self.item_weights],
        }


def _check_n(n: int):
    if not 1 <= n <= MAX_N:
        raise SetFunctionError(f"ground set size must be in [1, {MAX_N}], got {n}")


def _num(v: float):
    return int(v) if float(v).is_integer() else float(v)


def check_submodular(f: SetFunction, samples: int | None = None, seed: int = 0, tol: float = 1e-9):
    """Check f(S+i+j) - f(S+i) - f(S+j) + f(S) <= tol over (S, i, j), i, j not in S.

    Exhaustive for n <= 20 when ``samples`` is None, otherwise checks that many
    random triples.  Returns ``(True, None)`` or ``(False, (S, i, j))`` with S
    as a frozenset.
    """
    n = f.n
    if samples is None:
        if n > EXHAUSTIVE_N:
            raise SetFunctionError("exhaustive submodularity check needs n <= 20; pass samples")
        t = f.table
        masks = np.arange(1 << n, dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                bi, bj = 1 << i, 1 << j
                base = masks[(masks & (bi | bj)) == 0]
                d = t[base | bi | bj] - t[base | bi] - t[base | bj] + t[base]
                k = int(np.argmax(d))
                if d.size and d[k] > tol:
                    return False, (to_set(int(base[k])), i, j)
        return True, None
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        i, j = rng.choice(n, size=2, replace=False)
        s = int(rng.integers(0, 1 << n)) & ~((1 << int(i)) | (1 << int(j)))
        bi, bj = 1 << int(i), 1 << int(j)
        d = f.value(s | bi | bj) - f.value(s | bi) - f.value(s | bj) + f.value(s)
        if d > tol:
            return False, (to_set(s), int(i), int(j))
    return True, None


def random_instance(
    kind: str,
    n: int,
    density: float = 0.4,
    weight_range: tuple[float, float] = (1, 10),
    seed: int = 0,
    integer_weights: bool = True,
) -> SetFunction:
    """Reproducible random digraph-cut or coverage instance."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    lo, hi = weight_range

    def draw():
        return float(rng.integers(lo, hi + 1)) if integer_weights else float(rng.uniform(lo, hi))

    if kind in ("digraph-cut", "hypergraph-cut", "random-digraph"):
        arcs = []
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < density:
                    arcs.append((u, v, draw()))
        return HypergraphCut.from_digraph(n, arcs)
    if kind in ("coverage", "random-coverage"):
        items = max(1, 2 * n)
        covers = [frozenset(int(u) for u in np.flatnonzero(rng.random(items) < density)) for _ in range(n)]
        return CoverageFunction(n, tuple(covers), tuple(draw() for _ in range(items)))
    raise SetFunctionError(f"unsupported instance kind {kind!r}")


# 8-vertex digraph on which annealing can be held to 17 out of 35.
TIGHT_EXAMPLE_ARCS: tuple[tuple[int, int, int], ...] = (
    (7, 3, 8), (3, 7, 4), (4, 3, 1), (3, 4, 11), (5, 3, 3), (3, 5, 1), (6, 3, 4),
    (0, 6, 4), (4, 0, 12), (4, 2, 3), (2, 4, 1), (7, 1, 4), (1, 4, 4),
)  # fmt: skip


def tight_example() -> HypergraphCut:
    return HypergraphCut.from_digraph(8, TIGHT_EXAMPLE_ARCS)


def zero_function(n: int) -> ModularFunction:
    return ModularFunction(n, (0.0,) * n)


def from_dict(d: dict) -> SetFunction:
    kind = d.get("kind", "hypergraph-cut")
    n = int(d["n"])
    if kind == "hypergraph-cut":
        edges = tuple(
            DirectedHyperedge(frozenset(e["tails"]), int(e["head"]), float(e.get("w", 1.0)))
            for e in d.get("edges", [])
        )
        return HypergraphCut(n, edges)
    if kind == "table":
        return TableFunction(n, tuple(d["values"]))
    if kind == "modular":
        return ModularFunction(n, tuple(d["weights"]), float(d.get("offset", 0.0)))
    if kind == "coverage":
        return CoverageFunction(n, tuple(frozenset(c) for c in d["covers"]), tuple(d["item_weights"]))
    raise SetFunctionError(f"unknown oracle kind {kind!r}")


def dumps(f: SetFunction, **extra) -> str:
    d = f.to_dict()
    d.update(extra)
    return json.dumps(d, sort_keys=True)


def loads(text: str) -> SetFunction:
    return from_dict(json.loads(text))

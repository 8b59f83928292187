"""Combinatorial checkers: common-neighbor bounds that every planar graph
must satisfy, and the Katona-style union lower bound for event families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from pdx.delaunay import Triangulation


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise ValueError(f"self-loop at {v}")
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate edge at {v}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_triangulation(cls, t: Triangulation) -> "SimpleGraph":
        return cls(
            t.n_vertices,
            tuple(tuple(int(w) for w in t.neighbors(v))
                  for v in range(t.n_vertices)),
        )

    def neighbors(self, v: int) -> set[int]:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range")
        return set(self.adjacency[v])


def common_neighbors(g: SimpleGraph, S) -> set[int]:
    """Vertices adjacent to every member of S, excluding S itself."""
    S = list(S)
    if not S:
        raise ValueError("S must be nonempty")
    out = g.neighbors(S[0])
    for s in S[1:]:
        out &= g.neighbors(s)
    return out - set(S)


@dataclass(frozen=True)
class TripleBoundResult:
    ok: bool
    witness: tuple[int, int, int] | None = None
    common: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_triple_bound(g: SimpleGraph) -> TripleBoundResult:
    """Planar graphs admit no vertex triple with 3 common outside neighbors
    (that would embed K_{3,3}).  Checks every triple; only triples that are
    jointly adjacent to some vertex can have common neighbors at all, so the
    scan enumerates neighbor triples around each vertex, O(sum deg^3).
    """
    seen: dict[tuple[int, int, int], list[int]] = {}
    for w in range(g.n):
        nbrs = g.adjacency[w]
        for trip in combinations(nbrs, 3):
            lst = seen.setdefault(trip, [])
            lst.append(w)
            if len(lst) >= 3:
                return TripleBoundResult(False, trip, tuple(lst[:3]))
    return TripleBoundResult(True)


def check_five_bound(g: SimpleGraph, S) -> bool:
    """True iff some pair in the 5-set S has at most 20 common neighbors
    outside S; guaranteed for planar graphs."""
    S = list(S)
    if len(S) != 5 or len(set(S)) != 5:
        raise ValueError("S must contain exactly 5 distinct vertices")
    for a, b in combinations(S, 2):
        if len(common_neighbors(g, (a, b))) <= 20:
            return True
    return False


@dataclass(frozen=True)
class EventMatrix:
    """Finite probability space (rows) against a family of events (columns)."""

    weights: np.ndarray  # (m,) nonnegative, sums to 1
    entries: np.ndarray  # (m, K) boolean

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        e = np.asarray(self.entries, dtype=bool)
        if w.ndim != 1 or e.ndim != 2 or e.shape[0] != w.shape[0]:
            raise ValueError("weights (m,) must match entries (m, K)")
        if (w < 0).any() or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "entries", e)


@dataclass(frozen=True)
class UnionBoundResult:
    precondition_ok: bool
    holds: bool
    lhs: float  # P(union)
    rhs: float  # (1/k) sum P(events)
    max_multiplicity: int

    def __bool__(self) -> bool:
        return self.precondition_ok and self.holds


def union_bound_check(m: EventMatrix, k: int) -> UnionBoundResult:
    """Verify P(union) >= (1/k) * sum P(B_i) when no sample point with
    positive weight lies in more than k events.  The inequality is a
    theorem under the precondition, so the result is falsy only when the
    precondition fails (the report carries the observed multiplicity).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    mult = m.entries.sum(axis=1)
    support = m.weights > 0
    max_mult = int(mult[support].max()) if support.any() else 0
    lhs = float(m.weights[m.entries.any(axis=1)].sum())
    rhs = float((m.weights[:, None] * m.entries).sum() / k)
    ok = max_mult <= k
    holds = lhs >= rhs - 1e-12
    return UnionBoundResult(precondition_ok=ok, holds=ok and holds,
                            lhs=lhs, rhs=rhs, max_multiplicity=max_mult)

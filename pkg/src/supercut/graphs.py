"""Undirected graphs with exact nonnegative (possibly infinite) edge weights."""
from __future__ import annotations

import warnings
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InputError
from .ext import INF, ExtRational, to_ext


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class WeightedGraph:
    """Immutable weighted graph on vertices ``0..n-1``.

    Self-loops are dropped with a warning, parallel edges are merged by
    summation and zero-weight edges are discarded, so ``edges`` only ever holds
    strictly positive weights keyed by ``(u, v)`` with ``u < v``.
    """

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple] = ()):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        merged: dict[tuple[int, int], ExtRational] = {}
        for u, v, w in edges:
            u, v = int(u), int(v)
            w = to_ext(w)
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if w < 0:
                raise InputError(f"negative edge weight {w} on ({u}, {v})")
            if u == v:
                warnings.warn(f"dropping self-loop on vertex {u}", stacklevel=2)
                continue
            key = (u, v) if u < v else (v, u)
            merged[key] = merged.get(key, Fraction(0)) + w
        self.n = n
        self.edges = {k: w for k, w in sorted(merged.items()) if w != 0}
        adj: list[list[tuple[int, ExtRational]]] = [[] for _ in range(n)]
        for (u, v), w in self.edges.items():
            adj[u].append((v, w))
            adj[v].append((u, w))
        self._adj = tuple(tuple(a) for a in adj)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={len(self.edges)})"

    def __eq__(self, other):
        return (
            isinstance(other, WeightedGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, tuple(self.edges.items())))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbours(self, u: int):
        return self._adj[u]

    def weight(self, u: int, v: int) -> ExtRational:
        key = (u, v) if u < v else (v, u)
        return self.edges.get(key, Fraction(0))

    def total_finite_weight(self) -> Fraction:
        return sum((w for w in self.edges.values() if w is not INF), Fraction(0))

    def components(self, infinite_only: bool = False) -> list[int]:
        """Connected components as bitmasks, ordered by smallest vertex.

        With ``infinite_only`` only infinite-weight edges connect vertices.
        """
        seen = 0
        comps = []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp = 1 << s
            stack = [s]
            while stack:
                u = stack.pop()
                for v, w in self._adj[u]:
                    if infinite_only and w is not INF:
                        continue
                    if not comp >> v & 1:
                        comp |= 1 << v
                        stack.append(v)
            seen |= comp
            comps.append(comp)
        return comps

    def induced(self, vertices: list[int]) -> "WeightedGraph":
        """Induced subgraph on ``vertices``, relabelled ``0..len-1`` in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        return WeightedGraph(
            len(vertices),
            [
                (index[u], index[v], w)
                for (u, v), w in self.edges.items()
                if u in index and v in index
            ],
        )


def cut_weight(graph: WeightedGraph, subset) -> ExtRational:
    """Total weight of edges with exactly one endpoint in ``subset``.

    ``subset`` is a bitmask or an iterable of vertices.
    """
    mask = subset if isinstance(subset, int) else mask_of(subset)
    if mask >> graph.n:
        raise InputError("subset contains vertices outside the graph")
    total = Fraction(0)
    for (u, v), w in graph.edges.items():
        if (mask >> u & 1) != (mask >> v & 1):
            total = total + w
    return total


def merge_vertices(graph: WeightedGraph, partition: Mapping[int, int] | list[int]) -> WeightedGraph:
    """Identify vertices according to ``partition`` (old vertex -> new vertex).

    New vertices are ``0..max(partition)``; edges inside a class vanish and
    parallel edges are summed.
    """
    if isinstance(partition, Mapping):
        missing = [v for v in range(graph.n) if v not in partition]
        if missing:
            raise InputError(f"partition is not total: missing {missing}")
        image = [partition[v] for v in range(graph.n)]
    else:
        image = list(partition)
        if len(image) != graph.n:
            raise InputError("partition is not total")
    m = max(image) + 1 if image else 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return WeightedGraph(
            m, [(image[u], image[v], w) for (u, v), w in graph.edges.items()]
        )

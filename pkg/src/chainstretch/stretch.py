"""Graph shortest paths over triangulation edges and the stretch factor."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .delaunay import Triangulation
from .geomcore import dist


@dataclass(frozen=True)
class EdgeGraph:
    """Undirected graph with Euclidean edge weights, as adjacency lists."""

    adjacency: tuple[tuple[tuple[int, float], ...], ...]

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @classmethod
    def from_triangulation(cls, t: Triangulation) -> "EdgeGraph":
        nbrs: list[list[tuple[int, float]]] = [[] for _ in t.points]
        for i, j in sorted(t.edges()):
            w = dist(t.points[i], t.points[j])
            nbrs[i].append((j, w))
            nbrs[j].append((i, w))
        return cls(tuple(tuple(a) for a in nbrs))


@dataclass(frozen=True)
class StretchReport:
    stretch: float
    witness: tuple[int, int]
    n: int

    def to_json(self) -> dict:
        return {"stretch": self.stretch, "witness": list(self.witness), "n": self.n}


def single_source(g: EdgeGraph, src: int) -> list[float]:
    """Dijkstra distances from ``src``; unreachable vertices get ``inf``."""
    d = [math.inf] * g.n
    d[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > d[u]:
            continue
        for v, w in g.adjacency[u]:
            nd = du + w
            if nd < d[v]:
                d[v] = nd
                heapq.heappush(heap, (nd, v))
    return d


def shortest_path_length(g: EdgeGraph, src: int, dst: int) -> float:
    """Shortest path length, ``math.inf`` when ``dst`` is unreachable."""
    if src == dst:
        return 0.0
    return single_source(g, src)[dst]


def stretch_factor(t: Triangulation) -> StretchReport:
    """Maximum over vertex pairs of graph distance / Euclidean distance.

    Ties go to the lexicographically smallest witness pair.
    """
    n = len(t.points)
    g = EdgeGraph.from_triangulation(t)
    best, witness = 1.0, (0, 1)
    for i in range(n - 1):
        d = single_source(g, i)
        pi = t.points[i]
        for j in range(i + 1, n):
            r = d[j] / dist(pi, t.points[j])
            if r > best:
                best, witness = r, (i, j)
    return StretchReport(best, witness, n)

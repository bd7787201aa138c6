"""Offline shortest paths with full knowledge of the blocked edges."""

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .graph import GraphError, ekey

__all__ = ["DistanceResult", "InfeasibleRoadMap", "shortest_distance", "opt_cost",
           "is_feasible", "stretch", "distances_from"]


class InfeasibleRoadMap(GraphError):
    """Raised when the source cannot reach the target avoiding the blocked edges."""


@dataclass(frozen=True)
class DistanceResult:
    cost: Fraction = None
    path: tuple = None

    @property
    def reachable(self):
        return self.cost is not None


UNREACHABLE = DistanceResult()


def shortest_distance(graph, excluded, x, y, allowed=None):
    """Cheapest x-y path avoiding `excluded`.

    Among minimum-cost paths the lexicographically smallest vertex sequence
    wins, so ties never depend on dict ordering.  `allowed` optionally
    restricts the vertices the path may use.
    """
    excluded = {ekey(*e) for e in excluded}
    if allowed is not None and (x not in allowed or y not in allowed):
        return UNREACHABLE
    if x == y:
        return DistanceResult(Fraction(0), (x,))
    # Heap entries carry the whole path; the key (cost, path) picks the
    # lexicographic minimum among equal costs.
    heap = [(Fraction(0), (x,))]
    done = set()
    while heap:
        cost, path = heapq.heappop(heap)
        v = path[-1]
        if v in done:
            continue
        done.add(v)
        if v == y:
            return DistanceResult(cost, path)
        for w in graph.neighbors(v):
            if w in done or ekey(v, w) in excluded:
                continue
            if allowed is not None and w not in allowed:
                continue
            heapq.heappush(heap, (cost + graph.weight(v, w), path + (w,)))
    return UNREACHABLE


def distances_from(graph, excluded, x, allowed=None):
    """Single-source exact distances (no paths)."""
    excluded = {ekey(*e) for e in excluded}
    dist = {x: Fraction(0)}
    heap = [(Fraction(0), x)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for w in graph.neighbors(v):
            if ekey(v, w) in excluded or (allowed is not None and w not in allowed):
                continue
            nd = d + graph.weight(v, w)
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def opt_cost(roadmap):
    r = shortest_distance(roadmap.graph, roadmap.blocked, roadmap.source, roadmap.target)
    if not r.reachable:
        raise InfeasibleRoadMap(f"{roadmap.source} cannot reach {roadmap.target}")
    return r.cost


def is_feasible(graph, s, t, blocked):
    return t in graph.reachable(s, excluded=blocked)


def stretch(graph):
    ws = graph.edges.values()
    return max(ws) / min(ws)

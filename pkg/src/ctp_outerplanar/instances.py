"""Instance generators, adversaries and brute-force game oracles."""

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .engine import Outcome, simulate
from .graph import (GraphError, OuterEmbedding, RoadMap, WeightedGraph, ekey, is_unbalanced, sides)
from .instance import Instance
from .oracle import is_feasible, opt_cost, shortest_distance

__all__ = [
    "TooManyConfigurations",
    "TooLarge",
    "NotUnbalanced",
    "SequenceTuple",
    "ShellAdversary",
    "gen_westphal",
    "gen_shell",
    "shell_adversary",
    "shell_ratio",
    "sequences",
    "transform_t",
    "gen_weighted_family",
    "admissible_configurations",
    "exhaustive_worst_ratio",
    "minimax_ratio",
    "random_outerplanar",
    "maximal_feasible_subsets",
]

MAX_CONFIGURATIONS = 10**6


class TooManyConfigurations(ValueError):
    pass


class TooLarge(ValueError):
    pass


class NotUnbalanced(GraphError):
    pass


def _check_eps(eps, label="eps"):
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"{label} must lie strictly between 0 and 1, got {eps}")
    return eps


# -- generators ----------------------------------------------------------


def gen_westphal(k, eps):
    """k+1 disjoint two-edge s-t paths, a unit edge then an `eps` edge.

    The universe is the set of `eps` edges with budget k.  For k >= 2 the
    graph contains K(2,3) and is not outerplanar; the stored boundary is the
    outer cycle through the first and last paths only.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    eps = _check_eps(eps)
    mids = [f"v{i}" for i in range(1, k + 2)]
    edges = []
    for m in mids:
        edges.append(("s", m, 1))
        edges.append((m, "t", eps))
    g = WeightedGraph(["s", "t", *mids], edges)
    emb = OuterEmbedding(("s", mids[0], "t", mids[-1]))
    universe = frozenset(ekey(m, "t") for m in mids)
    return Instance(f"westphal-k{k}", RoadMap(g, emb, "s", "t"), universe, k,
                    {"eps": str(eps)})


def gen_shell(n):
    """Cycle v0..v(2n-1) plus every chord v_i-v_n except v0-v_n.

    Source v0, target v_n.  The universe holds every edge at the target,
    the two boundary edges included, with budget deg(t) - 1.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    vs = [f"v{i}" for i in range(2 * n)]
    edges = {ekey(vs[i], vs[(i + 1) % (2 * n)]) for i in range(2 * n)}
    for i in range(2 * n):
        if i not in (0, n - 1, n, n + 1):
            edges.add(ekey(vs[i], vs[n]))
    g = WeightedGraph(vs, ((u, v, 1) for u, v in sorted(edges)))
    t = vs[n]
    universe = frozenset(ekey(t, w) for w in g.neighbors(t))
    return Instance(f"shell-{n}", RoadMap(g, OuterEmbedding(tuple(vs)), vs[0], t), universe,
                    len(universe) - 1)


class ShellAdversary:
    """Adaptive blocker for the target's edges on a shell graph.

    Without `release` every target edge is blocked on reveal while the
    target stays reachable.  With ``release=j`` edges revealed during the
    first j attempts (departures from s) are blocked and the first one
    revealed afterwards is left open.
    """

    def __init__(self, inst, release=None):
        self.graph = inst.graph
        self.s, self.t = inst.source, inst.target
        self.universe = frozenset(inst.universe)
        self.k = inst.k
        self.release = release
        self.decided = set()
        self.blocked = set()
        self.released = False

    def _attempt(self, state):
        walk = state.walk
        return sum(1 for i in range(len(walk) - 1) if walk[i] == self.s)

    def decide(self, state, fresh):
        out = set()
        for e in fresh:
            if self.release is not None and not self.released and self._attempt(state) > self.release:
                self.released = True
                continue
            trial = self.blocked | {e}
            if len(trial) <= self.k and is_feasible(self.graph, self.s, self.t, trial):
                self.blocked.add(e)
                out.add(e)
        return out


def shell_adversary(n_or_inst, release=None):
    inst = gen_shell(n_or_inst) if isinstance(n_or_inst, int) else n_or_inst
    return ShellAdversary(inst, release)


def shell_ratio(xs, j):
    """Closed-form ratio when the exit opens on attempt j+1 (with x0 = 0)."""
    x = [0, *xs]
    total = 2 * sum(x[1:j + 1]) + x[j - 1] + 2
    return Fraction(total, x[j - 1] + 2)


@dataclass(frozen=True)
class SequenceTuple:
    i: int
    r: int
    r_eps: Fraction
    S: int
    N: int
    k: int


def sequences(i, eps=0):
    """Ratio, weight, copy and blockage sequences at index i."""
    if i < 1:
        raise ValueError("i must be at least 1")
    eps = Fraction(eps)
    S, k = 2, 1
    for m in range(2, i + 1):
        S = S * (m + 1)  # r_{m-1} + 1 = m + 1
        k = m * (m + 1) * (k + 1)
    return SequenceTuple(i, i + 1, i + 1 - eps, S, i * (i + 1), k)


def transform_t(H, S, N, eps_star):
    """Serial composition of N copies of H under a heavy s-t edge.

    `H` is ``(graph, embedding, s, t)`` and must be (s, t)-unbalanced.  Copy j
    runs from junction ``j{j-1}`` (``s`` for j = 1) to junction ``j{j}``;
    its other vertices are renamed ``{j}.{name}``.  Every junction is joined
    to the new target by an `eps_star` edge, the last one being the terminus.
    """
    hg, hemb, hs, ht = H
    if not is_unbalanced(hg, hemb, hs, ht):
        raise NotUnbalanced("input must be (s,t)-unbalanced")
    eps_star = Fraction(eps_star)
    _, lower = sides(hemb.rotated(hs), hs, ht) if len(hg.vertices) > 2 else ((), ())

    def name(j, v):
        if v == hs:
            return "s" if j == 1 else f"j{j - 1}"
        if v == ht:
            return f"j{j}"
        return f"{j}.{v}"

    vertices = {"s", "t"}
    edges = [("s", "t", Fraction(S))]
    lower_seq = ["s"]
    for j in range(1, N + 1):
        vertices.update(name(j, v) for v in hg.vertices)
        edges.extend((name(j, u), name(j, v), w) for (u, v), w in hg.edges.items())
        edges.append((f"j{j}", "t", eps_star))
        lower_seq.extend(name(j, v) for v in lower)
        lower_seq.append(f"j{j}")
    boundary = ("s", "t", *reversed(lower_seq[1:]))
    return WeightedGraph(vertices, edges), OuterEmbedding(boundary)


def gen_weighted_family(i, eps_star):
    """The unbalanced graph H_i with its blockage universe and budget k_i.

    H_1 is the triangle s, u, t with w(st) = 2, w(su) = 1 and w(ut) = eps_star.
    The edge s-t is never blockable.
    """
    if i < 1:
        raise ValueError("i must be at least 1")
    eps_star = _check_eps(eps_star, "eps_star")
    g = WeightedGraph(["s", "u", "t"], [("s", "t", 2), ("s", "u", 1), ("u", "t", eps_star)])
    emb = OuterEmbedding(("s", "t", "u"))
    universe = {ekey("u", "t")}
    for m in range(2, i + 1):
        seq = sequences(m)
        prev_universe = universe
        g2, emb2 = transform_t((g, emb, "s", "t"), seq.S, seq.N, eps_star)

        def name(j, v):
            if v == "s":
                return "s" if j == 1 else f"j{j - 1}"
            if v == "t":
                return f"j{j}"
            return f"{j}.{v}"

        universe = {ekey(f"j{j}", "t") for j in range(1, seq.N + 1)}
        for j in range(1, seq.N + 1):
            universe.update(ekey(name(j, a), name(j, b)) for a, b in prev_universe)
        g, emb = g2, emb2
    return Instance(f"H{i}", RoadMap(g, emb, "s", "t"), frozenset(universe), sequences(i).k,
                    {"eps_star": str(eps_star)})


def random_outerplanar(n, seed, weight_mode="unit"):
    """Seeded random 2-connected outerplanar graph on vertices v0..v(n-1).

    A random triangulation of the polygon v0..v(n-1) is drawn by recursive
    apex choice; each diagonal is then kept with probability 1/2.
    `weight_mode` is ``"unit"``, ``("stretch", S)`` for integer weights in
    [1, S] with both extremes present, or ``"arbitrary"`` for rationals
    p/q with 1 <= p, q <= 9.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = random.Random(seed)
    vs = [f"v{i}" for i in range(n)]
    chords = []
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        k = rng.randint(i + 1, j - 1)
        for a, b in ((i, k), (k, j)):
            if b - a > 1:
                chords.append((a, b))
            stack.append((a, b))
    kept = [c for c in sorted(chords) if rng.random() < 0.5]
    pairs = [(i, (i + 1) % n) for i in range(n)] + kept
    if weight_mode == "unit":
        ws = [1] * len(pairs)
    elif weight_mode == "arbitrary":
        ws = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in pairs]
    elif isinstance(weight_mode, tuple) and weight_mode[0] == "stretch":
        S = int(weight_mode[1])
        ws = [rng.randint(1, S) for _ in pairs]
        ws[0], ws[1] = 1, S
    else:
        raise ValueError(f"unknown weight mode {weight_mode!r}")
    g = WeightedGraph(vs, ((vs[a], vs[b], w) for (a, b), w in zip(pairs, ws)))
    return g, OuterEmbedding(tuple(vs))


# -- brute-force oracles -------------------------------------------------


def admissible_configurations(graph, s, t, universe, k):
    """Every subset of `universe` with at most k edges that keeps s and t connected.

    Ordered by size, then lexicographically.
    """
    universe = sorted(universe)
    k = len(universe) if k is None else min(k, len(universe))
    total = sum(math.comb(len(universe), r) for r in range(k + 1))
    if total > MAX_CONFIGURATIONS:
        raise TooManyConfigurations(f"{total} configurations exceed {MAX_CONFIGURATIONS}")
    for r in range(k + 1):
        for combo in itertools.combinations(universe, r):
            if is_feasible(graph, s, t, combo):
                yield frozenset(combo)


def maximal_feasible_subsets(graph, s, t, universe):
    """Feasible blockage sets to which no universe edge can be added."""
    configs = list(admissible_configurations(graph, s, t, universe, None))
    feasible = set(configs)
    out = []
    for c in configs:
        if all((c | {e}) not in feasible for e in universe if e not in c):
            out.append(c)
    return out


def exhaustive_worst_ratio(factory, inst, step_limit=None):
    """Maximum exact ratio of `factory`'s strategy over all admissible configurations.

    Ties go to the lexicographically smallest configuration.  Returns
    ``(ratio, configuration)``.
    """
    rm = inst.roadmap
    universe = inst.universe if inst.universe is not None else frozenset()
    best = None
    for config in admissible_configurations(rm.graph, rm.source, rm.target, universe, inst.k):
        road = rm.with_blocked(config)
        strat = factory(rm.graph, rm.embedding, rm.source, rm.target)
        res = simulate(strat, road, step_limit)
        if res.outcome is not Outcome.REACHED:
            raise RuntimeError(f"strategy ended with {res.outcome.value} on {sorted(config)}")
        ratio = res.traversed / opt_cost(road)
        key = tuple(sorted(config))
        if best is None or ratio > best[0] or (ratio == best[0] and key < best[1]):
            best = (ratio, key)
    return best[0], frozenset(best[1])


def minimax_ratio(inst, max_universe=14, max_vertices=20):
    """Value of the traversal game against an adaptive adversary.

    The traveller moves between information points (vertices with an
    unrevealed universe edge) and the target along cheapest known-open
    paths.  On each reveal the adversary picks statuses keeping the budget
    and s-t connectivity.  A finished walk of cost C scores C over the
    cheapest s-t distance consistent with what was revealed.
    """
    rm = inst.roadmap
    g, s, t = rm.graph, rm.source, rm.target
    universe = tuple(sorted(inst.universe or ()))
    k = len(universe) if inst.k is None else inst.k
    if len(universe) > max_universe or len(g.vertices) > max_vertices:
        raise TooLarge("instance too large for exhaustive game search")
    pos_of = {e: i for i, e in enumerate(universe)}
    fixed_blocked = rm.blocked - set(universe)
    UNKNOWN, OPEN, BLOCK = 0, 1, 2

    def blocked_of(stat):
        return fixed_blocked | {universe[i] for i, x in enumerate(stat) if x == BLOCK}

    def info(v, stat):
        return any(stat[pos_of[ekey(v, w)]] == UNKNOWN for w in g.neighbors(v) if ekey(v, w) in pos_of)

    def known_open(a, b, stat):
        e = ekey(a, b)
        if e in pos_of:
            return stat[pos_of[e]] == OPEN
        return e not in fixed_blocked

    @lru_cache(maxsize=None)
    def d_min(stat):
        return shortest_distance(g, blocked_of(stat), s, t).cost

    @lru_cache(maxsize=None)
    def adversary(pos, stat, cost):
        fresh = [pos_of[ekey(pos, w)] for w in g.neighbors(pos)
                 if ekey(pos, w) in pos_of and stat[pos_of[ekey(pos, w)]] == UNKNOWN]
        if not fresh or pos == t:
            return traveller(pos, stat, cost)
        used = sum(1 for x in stat if x == BLOCK)
        best = None
        for r in range(len(fresh) + 1):
            if used + r > k:
                break
            for chosen in itertools.combinations(fresh, r):
                new = list(stat)
                for i in fresh:
                    new[i] = BLOCK if i in chosen else OPEN
                new = tuple(new)
                if d_min(new) is None:
                    continue
                val = traveller(pos, new, cost)
                if best is None or val > best:
                    best = val
        return best

    @lru_cache(maxsize=None)
    def traveller(pos, stat, cost):
        if pos == t:
            return cost / d_min(stat)
        # Dijkstra over known-open edges; info vertices and t end a macro move.
        dist = {pos: Fraction(0)}
        done = set()
        frontier = [(Fraction(0), pos)]
        targets = []
        while frontier:
            frontier.sort(reverse=True)
            d, v = frontier.pop()
            if v in done:
                continue
            done.add(v)
            if v != pos and (v == t or info(v, stat)):
                targets.append((v, d))
                continue
            for w in g.neighbors(v):
                if w in done or not known_open(v, w, stat):
                    continue
                nd = d + g.weight(v, w)
                if w not in dist or nd < dist[w]:
                    dist[w] = nd
                    frontier.append((nd, w))
        best = None
        for v, d in targets:
            val = adversary(v, stat, cost + d)
            if best is None or val < best:
                best = val
        return best

    return adversary(s, (UNKNOWN,) * len(universe), Fraction(0))

"""Online strategies: exponential side balancing, repositioning and fixed budgets.

:class:`ExpBalancing` runs as a coroutine.  Each call to ``next_move`` resumes
the automaton until it asks for the next vertex, which keeps the control
flow of the attempts (walk out, retrace, cross, probe) readable.
"""

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import SURRENDER, Strategy
from .graph import GraphError, biconnected_decomposition, ekey, sides, target_component
from .oracle import shortest_distance

__all__ = [
    "UPPER",
    "LOWER",
    "EmbeddingRequired",
    "NotUnitWeight",
    "MissingAnnotations",
    "ExpBalancing",
    "Reposition",
    "BudgetSequence",
    "DecomposeWrapper",
    "exp_balancing",
    "exp_balancing_any",
    "reposition",
    "decompose_wrapper",
    "doubling",
    "Checkpoint",
    "LevelReport",
    "check_levels",
]

UPPER, LOWER = "Upper", "Lower"
OTHER = {UPPER: LOWER, LOWER: UPPER}

BUDGET, BLOCKED, REBALANCED, DONE = "budget", "blocked", "rebalanced", "done"


class EmbeddingRequired(GraphError):
    pass


class NotUnitWeight(GraphError):
    pass


class MissingAnnotations(ValueError):
    pass


class _Level:
    """Automaton state for one recursion level."""

    def __init__(self, graph, embedding, comp, s, t, depth):
        self.comp = frozenset(comp)
        self.s, self.t, self.depth = s, t, depth
        emb = embedding.restricted(self.comp).rotated(s)
        up, lo = sides(emb, s, t)
        self.seq = {UPPER: (s, *up, t), LOWER: (s, *lo, t)}
        self.idx = {side: {v: i for i, v in enumerate(seq)} for side, seq in self.seq.items()}
        self.side_of = {**{v: UPPER for v in up}, **{v: LOWER for v in lo}}
        self.paths = {UPPER: [s], LOWER: [s]}
        self.pruned = set()
        self.seen = {s}
        self.D = 0
        self.cur = UPPER
        self.graph = graph

    def alive(self, v):
        return v in self.comp and v not in self.pruned

    def frontier(self, side):
        return self.paths[side][-1]


class ExpBalancing(Strategy):
    """Side-balancing exploration with budgets that double at each switch.

    Parameters
    ----------
    graph, embedding, s, t
        A 2-connected outerplanar instance; wrap with :class:`DecomposeWrapper`
        for graphs with articulation points.
    stretch_mode : bool
        Accept non-unit weights and move as if every edge had weight 1.

    Notes
    -----
    The upper side is tried first.  Budgets count traversed edges.  Open
    vertical chords trigger either a probe of the other side (during the
    first half of an attempt on the longer side) or a recursive run on the
    part of the graph beyond the chord.
    """

    name = "expbalancing"

    def __init__(self, graph, embedding, s, t, stretch_mode=False):
        super().__init__()
        if embedding is None:
            raise EmbeddingRequired("an outer-face embedding is required")
        if not stretch_mode and any(w != 1 for w in graph.edges.values()):
            raise NotUnitWeight("weights differ from 1; pass stretch_mode=True")
        self.graph, self.embedding, self.s, self.t = graph, embedding, s, t
        # Fail early on embeddings that do not give two sides.
        sides(embedding.restricted(graph.vertices).rotated(s), s, t)
        self.state = None
        self._gen = None

    def next_move(self, state):
        self.state = state
        if self._gen is None:
            self._gen = self._run()
        try:
            return next(self._gen)
        except StopIteration:
            return SURRENDER

    # -- primitives ---------------------------------------------------

    def _run(self):
        yield from self._level(self.graph.vertices, self.s, 0)
        while True:
            yield SURRENDER

    def _annotate(self, L, state, **extra):
        self.note(state=state, D=L.D, side=extra.pop("side", L.cur), recursion=L.depth,
                  source=L.s, **extra)

    def _retrace(self, L, side):
        for v in reversed(L.paths[side][:-1]):
            yield v

    def _walk_out(self, L, side):
        for v in L.paths[side][1:]:
            yield v

    def _forward(self, L, side, c):
        idx = L.idx[side]
        i = idx[c]
        best = None
        for w in self.graph.neighbors(c):
            j = idx.get(w)
            if j is None or j <= i or not L.alive(w) or not self.state.is_open(c, w):
                continue
            if best is None or j > best[0]:
                best = (j, w)
        return None if best is None else best[1]

    def _backward(self, L, side, c):
        idx = L.idx[side]
        i = idx[c]
        best = None
        for w in self.graph.neighbors(c):
            j = idx.get(w)
            if j is None or j >= i or w in L.seen or not L.alive(w) or not self.state.is_open(c, w):
                continue
            if best is None or j < best[0]:
                best = (j, w)
        return None if best is None else best[1]

    def _verticals(self, L, side, c):
        other = OTHER[side]
        return [w for w in self.graph.neighbors(c)
                if L.side_of.get(w) == other and L.alive(w) and w not in L.seen
                and self.state.is_open(c, w)]

    def _piece(self, L, u, v):
        keep = [x for x in L.comp if x not in L.pruned]
        return target_component(self.graph.subgraph(keep), (u, v), L.t)

    def _side_blocked(self, L, side):
        allowed = set(L.seq[side])
        seen = {L.s}
        queue = deque([L.s])
        while queue:
            a = queue.popleft()
            for b in self.graph.neighbors(a):
                if b in allowed and b not in seen and L.alive(b) and not self.state.is_blocked(a, b):
                    seen.add(b)
                    queue.append(b)
        return L.t not in seen

    # -- automaton ----------------------------------------------------

    def _level(self, comp, source, depth):
        L = _Level(self.graph, self.embedding, comp, source, self.t, depth)
        self._annotate(L, "E1", component=sorted(L.comp), target=L.t)
        r = yield from self._explore(L, UPPER, 1, "ab")
        if r == DONE:
            return DONE
        if r == BLOCKED:
            yield from self._retrace(L, UPPER)
            return (yield from self._bypass(L, LOWER))
        if r == BUDGET:
            yield from self._retrace(L, UPPER)
            self._annotate(L, "E2", side=LOWER)
            r = yield from self._explore(L, LOWER, 1, "ca")
            if r == DONE:
                return DONE
            if r == BLOCKED:
                yield from self._retrace(L, LOWER)
                return (yield from self._bypass(L, UPPER))
            L.D, L.cur = 1, LOWER
            self._annotate(L, "A", x=L.frontier(LOWER), y=L.frontier(UPPER))
        while True:
            cur, oth = L.cur, OTHER[L.cur]
            r = yield from self._explore(L, cur, L.D, "ab")
            if r == DONE:
                return DONE
            if r == REBALANCED:
                continue
            if r == BLOCKED:
                yield from self._retrace(L, cur)
                return (yield from self._bypass(L, oth))
            self._annotate(L, "B", x=L.frontier(cur), y=L.frontier(oth))
            yield from self._retrace(L, cur)
            if self._side_blocked(L, oth):
                return (yield from self._bypass(L, cur))
            yield from self._walk_out(L, oth)
            self._annotate(L, "C", x=L.frontier(cur), y=L.frontier(oth))
            r = yield from self._explore(L, oth, L.D, "ca")
            if r == DONE:
                return DONE
            if r == BLOCKED:
                yield from self._retrace(L, oth)
                return (yield from self._bypass(L, cur))
            L.D *= 2
            L.cur = oth
            self._annotate(L, "A", x=L.frontier(oth), y=L.frontier(cur))

    def _explore(self, L, side, budget, mode):
        """Advance on `side` from its frontier, where the traveller stands."""
        taken = 0
        while budget is None or taken < budget:
            c = L.frontier(side)
            w = self._forward(L, side, c)
            if w is None:
                return BLOCKED
            lo, hi = L.idx[side][c], L.idx[side][w]
            if hi > lo + 1 and w != L.t:
                skipped = L.seq[side][lo + 1:hi]
                L.pruned.update(skipped)
                self.note(kind="prune", recursion=L.depth, at=c, chord=[c, w], pruned=list(skipped))
            yield w
            taken += 1
            L.paths[side].append(w)
            L.seen.add(w)
            if w == L.t:
                return DONE
            if (budget is None or taken < budget) and self.state.is_open(w, L.t):
                continue
            cands = self._verticals(L, side, w)
            if cands:
                return (yield from self._on_vertical(L, side, w, cands, mode, taken))
        return BUDGET

    def _on_vertical(self, L, side, u, cands, mode, alpha):
        pieces = []
        for v in cands:
            piece = self._piece(L, u, v)
            pieces.append((len(piece), -L.idx[OTHER[side]][v], v, piece))
        _, _, v, piece = min(pieces, key=lambda p: p[:3])
        if mode == "ab":
            return (yield from self._probe(L, side, u, v, alpha))
        trigger = {"ca": "step6", "bypass": "step4", "cross": "cross"}[mode]
        return (yield from self._recurse(L, u, v, u, piece, trigger))

    def _recurse(self, L, u, v, source, piece, trigger):
        self.note(kind="recurse", trigger=trigger, recursion=L.depth, u=u, v=v, source=source,
                  component=sorted(piece))
        yield from self._level(piece, source, L.depth + 1)
        return DONE

    def _probe(self, L, side, u, v, alpha):
        oth = OTHER[side]
        self._annotate(L, "ProbeOtherSide", side=side, alpha=alpha, u=u, v=v)
        yield v
        L.seen.add(v)
        on_path = {z: i for i, z in enumerate(L.paths[oth])}
        probe = [v]
        z = self._sees(on_path, v)
        while z is None and len(probe) - 1 < alpha - 1:
            nxt = self._backward(L, oth, probe[-1])
            if nxt is None:
                break
            yield nxt
            L.seen.add(nxt)
            probe.append(nxt)
            z = self._sees(on_path, nxt)
        beta = len(probe) - 1
        dist_u = len(L.paths[side]) - 1
        via = None if z is None else on_path[z] + 1 + beta
        for p in reversed(probe[:-1]):
            yield p
        if via is not None and via == dist_u:
            L.paths[oth] = L.paths[oth][:on_path[z] + 1] + list(reversed(probe))
            L.D = dist_u
            L.cur = oth
            self._annotate(L, "A", x=v, y=u, alpha=alpha, beta=beta)
            # Crossing revealed v's own chords back to the first side.
            cands = self._verticals(L, oth, v)
            if cands:
                return (yield from self._on_vertical(L, oth, v, cands, "cross", 0))
            return REBALANCED
        piece = self._piece(L, u, v)
        if via is not None and via < dist_u:
            return (yield from self._recurse(L, u, v, v, piece, "step5-see"))
        yield u
        return (yield from self._recurse(L, u, v, u, piece, "step5-nosee"))

    def _sees(self, on_path, p):
        best = None
        for z in self.graph.neighbors(p):
            if z in on_path and self.state.is_open(p, z):
                if best is None or on_path[z] < on_path[best]:
                    best = z
        return best

    def _bypass(self, L, side):
        self._annotate(L, "Bypass", side=side)
        yield from self._walk_out(L, side)
        r = yield from self._explore(L, side, None, "bypass")
        if r == BLOCKED:
            self.note(kind="fallback", recursion=L.depth)
            yield from self._fallback(L)
        return DONE

    def _fallback(self, L):
        allowed = {x for x in L.comp if x not in L.pruned} | {self.state.position}
        while self.state.position != L.t:
            r = shortest_distance(self.graph, self.state.known_blocked(), self.state.position, L.t, allowed)
            if not r.reachable:
                yield SURRENDER
                return
            yield r.path[1]


class Reposition(Strategy):
    """Follow the cheapest path that looks open; on a blockage walk back to s and replan."""

    name = "reposition"

    def __init__(self, graph, embedding=None, s=None, t=None):
        super().__init__()
        self.graph, self.s, self.t = graph, s, t
        self._plan = None
        self._retreat = []

    def next_move(self, state):
        pos = state.position
        if self._retreat:
            return self._retreat.pop()
        if self._plan is not None and len(self._plan) > 1 and self._plan[0] == pos:
            nxt = self._plan[1]
            if state.is_open(pos, nxt):
                self._plan = self._plan[1:]
                return nxt
            if pos != self.s:
                walk = state.walk
                i = len(walk) - 1 - walk[::-1].index(self.s)
                self._retreat = list(walk[i:-1])
                self._plan = None
                self.note(kind="backtrack", at=pos, blocked=[pos, nxt])
                return self._retreat.pop()
        r = shortest_distance(self.graph, state.known_blocked(), pos, self.t)
        if not r.reachable:
            return SURRENDER
        self._plan = r.path
        self.note(kind="plan", path=list(r.path))
        return self.next_move(state)


class BudgetSequence(Strategy):
    """Alternate sides from s with distance budgets x1, x2, ...

    Upper side on odd attempts, lower side on even ones.  Any open edge to
    the target is taken as soon as it is seen.
    """

    name = "budgets"

    def __init__(self, graph, embedding, s, t, budgets):
        super().__init__()
        up, lo = sides(embedding.rotated(s), s, t)
        self.seq = {UPPER: (s, *up), LOWER: (s, *lo)}
        self.graph, self.s, self.t = graph, s, t
        self.budgets = budgets
        self.state = None
        self._gen = None

    def next_move(self, state):
        self.state = state
        if self._gen is None:
            self._gen = self._run()
        try:
            return next(self._gen)
        except StopIteration:
            return SURRENDER

    def _run(self):
        for i, x in enumerate(self.budgets, 1):
            side = UPPER if i % 2 else LOWER
            seq = self.seq[side]
            self.note(kind="attempt", index=i, budget=x, side=side)
            went = [self.s]
            for d in range(1, min(x, len(seq) - 1) + 1):
                if not self.state.is_open(went[-1], seq[d]):
                    break
                yield seq[d]
                went.append(seq[d])
                if self.state.is_open(seq[d], self.t):
                    yield self.t
                    return
            for v in reversed(went[:-1]):
                yield v


def doubling():
    """The budgets 1, 2, 4, 8, ..."""
    return (2**i for i in itertools.count())


class DecomposeWrapper(Strategy):
    """Chain an inner strategy over the blocks between s and t."""

    def __init__(self, factory, graph, embedding, s, t):
        super().__init__()
        self.factory = factory
        self.chain = biconnected_decomposition(graph, embedding, s, t)
        self.name = getattr(factory, "strategy_name", "wrapped")
        self._i = 0
        self._inner = None

    def next_move(self, state):
        while self._i < len(self.chain) and state.position == self.chain[self._i].target:
            self._i += 1
            self._inner = None
        if self._i >= len(self.chain):
            return SURRENDER
        blk = self.chain[self._i]
        if self._inner is None:
            self.note(kind="block", index=self._i, source=blk.source, target=blk.target,
                      vertices=len(blk.graph.vertices))
            if len(blk.graph.vertices) == 2:
                return blk.target if state.is_open(blk.source, blk.target) else SURRENDER
            self._inner = self.factory(blk.graph, blk.embedding, blk.source, blk.target)
        move = self._inner.next_move(state)
        self._notes.extend(self._inner.drain_notes())
        return move


def exp_balancing(graph, embedding, s, t, stretch_mode=False):
    return ExpBalancing(graph, embedding, s, t, stretch_mode=stretch_mode)


def exp_balancing_any(graph, embedding, s, t):
    """ExpBalancing that switches to stretch mode when weights are not all 1."""
    unit = all(w == 1 for w in graph.edges.values())
    return ExpBalancing(graph, embedding, s, t, stretch_mode=not unit)


def reposition(graph, embedding=None, s=None, t=None):
    return Reposition(graph, embedding, s, t)


def decompose_wrapper(factory):
    """Factory running `factory` block by block along the articulation chain."""

    def make(graph, embedding, s, t):
        return DecomposeWrapper(factory, graph, embedding, s, t)

    make.strategy_name = getattr(factory, "strategy_name", getattr(factory, "__name__", "wrapped"))
    return make


exp_balancing.strategy_name = "expbalancing"
exp_balancing_any.strategy_name = "expbalancing"
reposition.strategy_name = "reposition"


# -- instrumentation -----------------------------------------------------


@dataclass(frozen=True)
class Checkpoint:
    phase: str
    D: int
    T: Fraction
    d_opt: Fraction
    ok: bool
    detail: str = ""


@dataclass
class LevelReport:
    checkpoints: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checkpoints)

    def failures(self):
        return [c for c in self.checkpoints if not c.ok]


def check_levels(trace, roadmap):
    """Replay an annotated trace against the true blocked set.

    Distances use the real weights, so the checks are meant for unit-weight
    road maps.  Traces of block-chained runs are checked block by block.
    Checks, per recursion level and before that level's recursive call:
    equal explored depth D on both sides with ``T <= 5D`` in state A, and
    ``T <= 9 d_opt`` after every move.  Prune events must keep the distance
    to the target, and recursion on a chord ``uv`` with source ``u`` needs
    ``d(s', v) = d(s', u) + 1``.
    """
    g, blocked, t = roadmap.graph, roadmap.blocked, roadmap.target
    if not any(ev.get("state") == "E1" for ev in trace if ev["event"] == "annotate"):
        raise MissingAnnotations("trace carries no automaton annotations")
    report = LevelReport()
    level = None
    cost = Fraction(0)
    position = None

    def dist(a, b, allowed):
        r = shortest_distance(g, blocked, a, b, allowed)
        return r.cost

    for ev in trace:
        kind = ev["event"]
        if kind == "move":
            cost = Fraction(ev["cost"])
            position = ev["vertex"]
            if level is not None and level["open"]:
                T = cost - level["cost0"]
                report.checkpoints.append(Checkpoint(
                    "move", level["D"], T, level["dopt"], T <= 9 * level["dopt"], f"at {position}"))
            continue
        if kind != "annotate":
            continue
        cost = Fraction(ev["cost"])
        st = ev.get("state")
        if st == "E1":
            comp = frozenset(ev["component"])
            level = {"comp": comp, "source": ev["source"], "target": ev.get("target", t), "cost0": cost,
                     "open": True, "D": 0, "pruned": set()}
            level["dopt"] = dist(ev["source"], level["target"], comp)
            continue
        if ev.get("kind") == "block":
            level = None
            continue
        if level is None:
            continue
        if st is not None:
            level["D"] = ev["D"]
        if st == "A" and level["open"]:
            T = cost - level["cost0"]
            D = ev["D"]
            dx = dist(level["source"], ev["x"], level["comp"])
            dy = dist(level["source"], ev["y"], level["comp"])
            ok = dx == D and dy == D and T <= 5 * D and T <= 9 * level["dopt"]
            report.checkpoints.append(Checkpoint(
                "A", D, T, level["dopt"], ok, f"d(x)={dx} d(y)={dy}"))
        elif ev.get("kind") == "prune" and level["open"]:
            before = level["comp"] - level["pruned"]
            level["pruned"].update(ev["pruned"])
            after = level["comp"] - level["pruned"]
            d0 = dist(ev["at"], level["target"], before)
            d1 = dist(ev["at"], level["target"], after)
            report.checkpoints.append(Checkpoint(
                "prune", level["D"], cost - level["cost0"], level["dopt"], d0 == d1,
                f"d before={d0} after={d1}"))
        elif ev.get("kind") == "recurse" and level["open"]:
            level["open"] = False
            if ev["trigger"] in ("step4", "step5-nosee", "step6", "cross"):
                du = dist(level["source"], ev["u"], level["comp"])
                dv = dist(level["source"], ev["v"], level["comp"])
                ok = du is not None and dv is not None and dv == du + 1
                report.checkpoints.append(Checkpoint(
                    "recurse:" + ev["trigger"], level["D"], cost - level["cost0"], level["dopt"], ok,
                    f"d(u)={du} d(v)={dv}"))
    return report

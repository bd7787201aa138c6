"""Online traversal game: reveal-on-visit, legal moves, cost accounting.

A traveller at vertex ``v`` knows the status of every edge incident with a
visited vertex.  Strategies see a :class:`KnowledgeState` and answer with a
neighbouring vertex (over an edge known to be open) or :data:`SURRENDER`.
"""

import json
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .graph import GraphError, RoadMap, edge_label, ekey
from .instance import rational
from .oracle import InfeasibleRoadMap, is_feasible, opt_cost

__all__ = [
    "Status",
    "Outcome",
    "SURRENDER",
    "IllegalMove",
    "StrategyFault",
    "NotCompleted",
    "KnowledgeState",
    "Strategy",
    "SimulationResult",
    "init_state",
    "step",
    "simulate",
    "competitive_ratio",
    "trace_lines",
    "DEFAULT_STEP_LIMIT",
]

DEFAULT_STEP_LIMIT = 10**6


class Status(Enum):
    UNKNOWN = "unknown"
    OPEN = "open"
    BLOCKED = "blocked"


class Outcome(Enum):
    REACHED = "ReachedTarget"
    SURRENDERED = "Surrendered"
    STEP_LIMIT = "StepLimit"


class _Surrender:
    def __repr__(self):
        return "SURRENDER"


SURRENDER = _Surrender()


class IllegalMove(GraphError):
    """Raised by :func:`step` when the requested move is not allowed."""


class StrategyFault(RuntimeError):
    """A strategy asked for an illegal move during :func:`simulate`."""


class NotCompleted(ValueError):
    """Competitive ratio requested for a run that did not reach the target."""


class KnowledgeState:
    """What the traveller knows at one point of the walk.

    `statuses` maps every edge to a :class:`Status`.  Treat instances as
    read-only; :func:`step` returns a fresh copy.
    """

    __slots__ = ("graph", "source", "target", "position", "statuses", "visited", "cost", "walk")

    def __init__(self, graph, source, target, position, statuses, visited, cost, walk):
        self.graph = graph
        self.source = source
        self.target = target
        self.position = position
        self.statuses = statuses
        self.visited = visited
        self.cost = cost
        self.walk = walk

    def status(self, u, v):
        return self.statuses[ekey(u, v)]

    def is_open(self, u, v):
        return self.statuses.get(ekey(u, v)) is Status.OPEN

    def is_blocked(self, u, v):
        return self.statuses.get(ekey(u, v)) is Status.BLOCKED

    def known_blocked(self):
        return {e for e, st in self.statuses.items() if st is Status.BLOCKED}

    def copy(self):
        return KnowledgeState(self.graph, self.source, self.target, self.position,
                              dict(self.statuses), set(self.visited), self.cost, list(self.walk))

    def key(self):
        """Hashable summary used to check determinism of strategies."""
        return (self.position, tuple(sorted((e, s.value) for e, s in self.statuses.items())))


class Strategy:
    """Base class for online strategies.

    Subclasses implement :meth:`next_move`.  Annotations for the trace are
    queued with :meth:`note` and collected by the engine after each query.
    """

    name = "strategy"

    def __init__(self):
        self._notes = []

    def note(self, **fields):
        self._notes.append(fields)

    def drain_notes(self):
        out, self._notes = self._notes, []
        return out

    def next_move(self, state):
        raise NotImplementedError


@dataclass
class SimulationResult:
    outcome: Outcome
    traversed: Fraction
    walk: tuple
    trace: list
    roadmap: RoadMap
    state: KnowledgeState

    @property
    def reached(self):
        return self.outcome is Outcome.REACHED

    def annotations(self):
        return [e for e in self.trace if e["event"] == "annotate"]


def _reveal(state, v, roadmap, adversary, trace):
    for w in state.graph.neighbors(v):
        e = ekey(v, w)
        if state.statuses[e] is not Status.UNKNOWN:
            continue
        state.statuses[e] = Status.BLOCKED if e in roadmap.blocked else Status.OPEN
    if adversary is not None:
        fresh = [ekey(v, w) for w in state.graph.neighbors(v)
                 if ekey(v, w) in adversary.universe and ekey(v, w) not in adversary.decided]
        if fresh:
            blocked = adversary.decide(state, sorted(fresh))
            for e in fresh:
                adversary.decided.add(e)
                state.statuses[e] = Status.BLOCKED if e in blocked else Status.OPEN
    if trace is not None:
        for w in state.graph.neighbors(v):
            e = ekey(v, w)
            if e not in state._revealed_log:
                state._revealed_log.add(e)
                trace.append({"event": "reveal", "edge": edge_label(e), "status": state.statuses[e].value,
                              "cost": rational(state.cost)})


def init_state(roadmap, adversary=None):
    """Traveller at the source with the source's edges revealed."""
    if adversary is None and not is_feasible(roadmap.graph, roadmap.source, roadmap.target, roadmap.blocked):
        raise InfeasibleRoadMap(f"{roadmap.source} cannot reach {roadmap.target}")
    g = roadmap.graph
    st = KnowledgeState(g, roadmap.source, roadmap.target, roadmap.source,
                        {e: Status.UNKNOWN for e in g.edges}, {roadmap.source}, Fraction(0),
                        [roadmap.source])
    _reveal(st, roadmap.source, roadmap, adversary, None)
    return st


def _check_move(state, v):
    u = state.position
    if v not in state.graph.vertices or not state.graph.has_edge(u, v):
        raise IllegalMove(f"{v!r} is not adjacent to {u!r}")
    s = state.statuses[ekey(u, v)]
    if s is not Status.OPEN:
        raise IllegalMove(f"edge {u}-{v} is {s.value}")


def _apply(state, v, roadmap, adversary, trace):
    _check_move(state, v)
    state.cost += state.graph.weight(state.position, v)
    state.position = v
    state.walk.append(v)
    state.visited.add(v)
    if trace is not None:
        trace.append({"event": "move", "vertex": v, "cost": rational(state.cost)})
    _reveal(state, v, roadmap, adversary, trace)


def step(state, v, roadmap):
    """Return the state after moving to `v`; the input is left untouched.

    Raises
    ------
    IllegalMove
        If `v` is not adjacent or the edge is not known to be open.
    """
    nxt = state.copy()
    _apply(nxt, v, roadmap, None, None)
    return nxt


class _LoggedState(KnowledgeState):
    __slots__ = ("_revealed_log",)


def simulate(strategy, roadmap, step_limit=None, adversary=None):
    """Run `strategy` until it reaches the target, surrenders or hits the step limit.

    When `adversary` is given it decides the status of its universe edges at
    reveal time; ``roadmap.blocked`` is then ignored for those edges and the
    returned result carries the realized road map.
    """
    if step_limit is None:
        step_limit = int(os.environ.get("CTP_STEP_LIMIT", DEFAULT_STEP_LIMIT))
    if step_limit < 1:
        raise ValueError("step_limit must be at least 1")
    if adversary is not None:
        roadmap = roadmap.with_blocked(roadmap.blocked - adversary.universe)
        adversary.decided = set()
    base = init_state(roadmap, adversary)
    state = _LoggedState(base.graph, base.source, base.target, base.position, base.statuses,
                         base.visited, base.cost, base.walk)
    state._revealed_log = set()
    trace = [{"event": "move", "vertex": state.position, "cost": "0"}]
    for w in state.graph.neighbors(state.position):
        e = ekey(state.position, w)
        state._revealed_log.add(e)
        trace.append({"event": "reveal", "edge": edge_label(e), "status": state.statuses[e].value, "cost": "0"})
    outcome = Outcome.STEP_LIMIT
    steps = 0
    while True:
        if state.position == roadmap.target:
            outcome = Outcome.REACHED
            break
        if steps >= step_limit:
            break
        move = strategy.next_move(state)
        for n in strategy.drain_notes():
            trace.append({"event": "annotate", "cost": rational(state.cost), **n})
        if move is SURRENDER:
            outcome = Outcome.SURRENDERED
            break
        try:
            _apply(state, move, roadmap, adversary, trace)
        except IllegalMove as exc:
            raise StrategyFault(str(exc)) from exc
        steps += 1
    for n in strategy.drain_notes():
        trace.append({"event": "annotate", "cost": rational(state.cost), **n})
    if adversary is not None:
        realized = roadmap.blocked | {e for e in adversary.universe if state.statuses[e] is Status.BLOCKED}
        roadmap = roadmap.with_blocked(realized)
    final = KnowledgeState(state.graph, state.source, state.target, state.position, state.statuses,
                           state.visited, state.cost, state.walk)
    return SimulationResult(outcome, state.cost, tuple(state.walk), trace, roadmap, final)


def competitive_ratio(result, roadmap=None):
    """Exact traversed cost over the offline optimum of `roadmap`."""
    if result.outcome is not Outcome.REACHED:
        raise NotCompleted(f"run ended with {result.outcome.value}")
    return result.traversed / opt_cost(roadmap if roadmap is not None else result.roadmap)


def trace_lines(trace):
    """Serialize a trace as JSON lines."""
    return "".join(json.dumps(ev, sort_keys=True, default=str) + "\n" for ev in trace)

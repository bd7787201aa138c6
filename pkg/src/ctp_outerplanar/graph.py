"""Exact-weighted graphs, outer-face embeddings and chord geometry.

Vertices are opaque strings and edges are stored as sorted pairs, so a
graph serializes the same way on every run.  Weights are kept as
:class:`fractions.Fraction` so that every comparison downstream is exact.
"""

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import networkx as nx

__all__ = [
    "GraphError",
    "NotBiconnected",
    "UnknownEdge",
    "NotASeparator",
    "ChordClass",
    "WeightedGraph",
    "OuterEmbedding",
    "RoadMap",
    "Block",
    "ekey",
    "edge_label",
    "parse_edge_label",
    "validate",
    "sides",
    "classify_chord",
    "target_component",
    "source_component",
    "biconnected_decomposition",
    "is_unbalanced",
]


class GraphError(ValueError):
    """Raised when a graph cannot be represented (self-loop, parallel edge)."""


class NotBiconnected(GraphError):
    """Raised when an operation needs the boundary to be a simple cycle."""


class UnknownEdge(GraphError):
    """Raised when an edge is not part of the graph or embedding."""


class NotASeparator(GraphError):
    """Raised when a vertex pair does not separate anything from the target."""


class ChordClass(Enum):
    BOUNDARY = "BoundaryEdge"
    HORIZONTAL = "HorizontalChord"
    VERTICAL = "VerticalChord"


def ekey(u, v):
    """Canonical key of the undirected edge ``{u, v}``."""
    return (u, v) if u <= v else (v, u)


def edge_label(e):
    return f"{e[0]}-{e[1]}"


def parse_edge_label(text, vertices=None):
    """Parse ``"u-v"`` back into a canonical edge.

    When `vertices` is given, vertex names containing ``-`` are resolved by
    trying every split point.
    """
    if vertices is None:
        u, sep, v = text.partition("-")
        if not sep:
            raise GraphError(f"malformed edge label {text!r}")
        return ekey(u, v)
    for i, ch in enumerate(text):
        if ch == "-" and text[:i] in vertices and text[i + 1:] in vertices:
            return ekey(text[:i], text[i + 1:])
    raise GraphError(f"edge label {text!r} does not name two vertices")


class WeightedGraph:
    """Undirected simple graph with exact rational edge weights.

    Parameters
    ----------
    vertices : iterable of str
    edges : iterable of (u, v, w)
        ``w`` is anything :class:`fractions.Fraction` accepts.  Weights are
        not checked for positivity here; :func:`validate` reports those.

    Raises
    ------
    GraphError
        On self-loops, parallel edges or endpoints that are not vertices.
    """

    __slots__ = ("_vertices", "_weights", "_adj")

    def __init__(self, vertices, edges):
        self._vertices = frozenset(vertices)
        weights = {}
        adj = {v: set() for v in self._vertices}
        for u, v, w in edges:
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if u not in adj or v not in adj:
                raise GraphError(f"edge {u}-{v} uses an unknown vertex")
            e = ekey(u, v)
            if e in weights:
                raise GraphError(f"parallel edge {edge_label(e)}")
            weights[e] = Fraction(w)
            adj[u].add(v)
            adj[v].add(u)
        self._weights = weights
        self._adj = {v: tuple(sorted(n)) for v, n in adj.items()}

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        """Mapping from canonical edge to weight (do not mutate)."""
        return self._weights

    def weight(self, u, v):
        return self._weights[ekey(u, v)]

    def has_edge(self, u, v):
        return ekey(u, v) in self._weights

    def neighbors(self, v):
        return self._adj[v]

    def __len__(self):
        return len(self._vertices)

    def __repr__(self):
        return f"WeightedGraph(|V|={len(self._vertices)}, |E|={len(self._weights)})"

    def __eq__(self, other):
        return (
            isinstance(other, WeightedGraph)
            and self._vertices == other._vertices
            and self._weights == other._weights
        )

    def __hash__(self):
        return hash((self._vertices, frozenset(self._weights.items())))

    def subgraph(self, keep):
        keep = set(keep)
        return WeightedGraph(
            keep,
            ((u, v, w) for (u, v), w in self._weights.items() if u in keep and v in keep),
        )

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(self._vertices)
        g.add_edges_from((u, v, {"weight": w}) for (u, v), w in self._weights.items())
        return g

    def components(self, excluded=(), removed=()):
        """Connected components after dropping `excluded` edges and `removed` vertices."""
        excluded = {ekey(*e) for e in excluded}
        removed = set(removed)
        seen = set(removed)
        out = []
        for root in sorted(self._vertices):
            if root in seen:
                continue
            comp = {root}
            seen.add(root)
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in seen and ekey(x, y) not in excluded:
                        seen.add(y)
                        comp.add(y)
                        queue.append(y)
            out.append(comp)
        return out

    def reachable(self, x, excluded=(), removed=()):
        excluded = {ekey(*e) for e in excluded}
        removed = set(removed)
        if x in removed:
            return set()
        seen = {x}
        queue = deque([x])
        while queue:
            a = queue.popleft()
            for b in self._adj[a]:
                if b not in seen and b not in removed and ekey(a, b) not in excluded:
                    seen.add(b)
                    queue.append(b)
        return seen


@dataclass(frozen=True)
class OuterEmbedding:
    """Closed walk along the outer face.

    The walk is cyclic: the last vertex is followed by the first one.
    Articulation points may appear several times.
    """

    boundary: tuple

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))

    def is_simple(self):
        return len(set(self.boundary)) == len(self.boundary)

    def boundary_edges(self):
        b = self.boundary
        if len(b) < 2:
            return set()
        return {ekey(b[i], b[(i + 1) % len(b)]) for i in range(len(b)) if b[i] != b[(i + 1) % len(b)]}

    def restricted(self, keep):
        """Cyclic order induced on `keep`, consecutive repeats collapsed."""
        seq = [v for v in self.boundary if v in keep]
        out = []
        for v in seq:
            if not out or out[-1] != v:
                out.append(v)
        while len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return OuterEmbedding(tuple(out))

    def rotated(self, v):
        b = self.boundary
        i = b.index(v)
        return OuterEmbedding(b[i:] + b[:i])


@dataclass(frozen=True)
class RoadMap:
    """Graph with source, target and the hidden set of blocked edges."""

    graph: WeightedGraph
    embedding: OuterEmbedding
    source: str
    target: str
    blocked: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        blocked = frozenset(ekey(*e) for e in self.blocked)
        object.__setattr__(self, "blocked", blocked)
        if self.source == self.target:
            raise GraphError("source and target must differ")
        for v in (self.source, self.target):
            if v not in self.graph.vertices:
                raise GraphError(f"unknown vertex {v!r}")
        missing = [e for e in blocked if e not in self.graph.edges]
        if missing:
            raise GraphError(f"blocked edge {edge_label(sorted(missing)[0])} is not in the graph")

    def with_blocked(self, blocked):
        return RoadMap(self.graph, self.embedding, self.source, self.target, frozenset(blocked))


@dataclass(frozen=True)
class Block:
    """One link of the articulation chain between source and target."""

    graph: WeightedGraph
    embedding: OuterEmbedding
    source: str
    target: str


def _blocks(graph):
    g = graph.to_networkx()
    return [frozenset(c) for c in nx.biconnected_components(g)]


def _between(order_index, n, a, b, x):
    """True if x lies strictly between a and b walking forward from a."""
    ia, ib, ix = order_index[a], order_index[b], order_index[x]
    return 0 < (ix - ia) % n < (ib - ia) % n


def _chords_cross(order_index, n, c1, c2):
    a, b = c1
    c, d = c2
    if len({a, b, c, d}) < 4:
        return False
    return _between(order_index, n, a, b, c) != _between(order_index, n, a, b, d)


def validate(graph, embedding):
    """List the violations of the embedded-outerplanar conventions.

    An empty list means the instance is a valid embedded outerplanar graph:
    connected, positive weights, every vertex on the boundary walk, every
    boundary step an edge, and no two chords of a block crossing.
    """
    report = []
    for e, w in sorted(graph.edges.items()):
        if w <= 0:
            report.append(f"non-positive weight {w} on edge {edge_label(e)}")
    if len(graph.vertices) > 0 and len(graph.components()) > 1:
        report.append("graph is disconnected")
    b = embedding.boundary
    unknown = sorted({v for v in b if v not in graph.vertices})
    for v in unknown:
        report.append(f"boundary vertex {v} is not in the graph")
    on_boundary = set(b)
    for v in sorted(graph.vertices - on_boundary):
        report.append(f"vertex {v} missing from boundary")
    if len(b) >= 2:
        for i in range(len(b)):
            x, y = b[i], b[(i + 1) % len(b)]
            if x == y or x in unknown or y in unknown:
                continue
            if not graph.has_edge(x, y):
                report.append(f"boundary step {x}-{y} is not an edge")
    if unknown:
        return report
    for block in sorted(_blocks(graph), key=sorted):
        if len(block) < 3:
            continue
        order = embedding.restricted(block).boundary
        if len(order) != len(block) or len(set(order)) != len(order):
            report.append(f"boundary of block {{{','.join(sorted(block))}}} is not a simple cycle")
            continue
        index = {v: i for i, v in enumerate(order)}
        n = len(order)
        ring = {ekey(order[i], order[(i + 1) % n]) for i in range(n)}
        chords = sorted(e for e in graph.edges if e[0] in block and e[1] in block and e not in ring)
        for i, c1 in enumerate(chords):
            for c2 in chords[i + 1:]:
                if _chords_cross(index, n, c1, c2):
                    report.append(f"chords {edge_label(c1)} and {edge_label(c2)} cross")
    return report


def sides(embedding, s, t):
    """Upper and lower sides strictly between `s` and `t`, each ordered from s to t.

    The upper side is the arc met first when walking the stored boundary
    forward from `s`.
    """
    if not embedding.is_simple():
        raise NotBiconnected("boundary is not a simple cycle")
    b = embedding.boundary
    if s not in b or t not in b:
        raise UnknownEdge("s and t must lie on the boundary")
    r = embedding.rotated(s).boundary
    j = r.index(t)
    upper = tuple(r[1:j])
    lower = tuple(reversed(r[j + 1:]))
    return upper, lower


def classify_chord(embedding, s, t, edge, graph=None):
    """Classify `edge` as boundary edge, horizontal or vertical chord."""
    u, v = ekey(*edge)
    if graph is not None and not graph.has_edge(u, v):
        raise UnknownEdge(f"{edge_label((u, v))} is not an edge")
    if u not in embedding.boundary or v not in embedding.boundary:
        raise UnknownEdge(f"{edge_label((u, v))} has an endpoint off the boundary")
    if ekey(u, v) in embedding.boundary_edges():
        return ChordClass.BOUNDARY
    if {u, v} & {s, t}:
        return ChordClass.HORIZONTAL
    upper, lower = sides(embedding, s, t)
    up = set(upper)
    return ChordClass.HORIZONTAL if (u in up) == (v in up) else ChordClass.VERTICAL


def target_component(graph, pair, t, excluded=(), source=None):
    """``{u, v}`` plus everything reachable from `t` without touching u or v.

    Raises
    ------
    NotASeparator
        If removing the pair leaves every other vertex reachable from `t`,
        or if `source` is given and stays reachable from `t`.
    """
    pair = set(pair)
    reach = graph.reachable(t, excluded=excluded, removed=pair) if t not in pair else set()
    rest = graph.vertices - pair
    if source is not None and source in reach:
        raise NotASeparator(f"{sorted(pair)} does not separate {source} from {t}")
    if t not in pair and reach == rest:
        raise NotASeparator(f"{sorted(pair)} separates nothing from {t}")
    return frozenset(reach | pair)


def source_component(graph, pair, s, excluded=()):
    return target_component(graph, pair, s, excluded=excluded)


def biconnected_decomposition(graph, embedding, s, t):
    """Chain of blocks every s-t walk must cross, in order from s to t.

    Blocks hanging off the chain are dropped.  Each entry carries the
    block's induced boundary and its entry/exit articulation vertices.
    """
    blocks = _blocks(graph)
    cut = set()
    tree = nx.Graph()
    for i, blk in enumerate(blocks):
        tree.add_node(("B", i))
        for v in blk:
            if sum(1 for other in blocks if v in other) > 1:
                cut.add(v)
    for i, blk in enumerate(blocks):
        for v in blk & cut:
            tree.add_edge(("B", i), ("C", v))

    def node_of(v):
        if v in cut:
            return ("C", v)
        return ("B", next(i for i, blk in enumerate(blocks) if v in blk))

    path = nx.shortest_path(tree, node_of(s), node_of(t))
    chain = []
    entry = s
    block_nodes = [n for n in path if n[0] == "B"]
    for pos, node in enumerate(block_nodes):
        blk = blocks[node[1]]
        if pos + 1 < len(block_nodes):
            nxt = blocks[block_nodes[pos + 1][1]]
            (exit_,) = blk & nxt
        else:
            exit_ = t
        sub = graph.subgraph(blk)
        chain.append(Block(sub, embedding.restricted(blk), entry, exit_))
        entry = exit_
    return chain


def is_unbalanced(graph, embedding, s, t):
    """True if the instance is a single edge s-t or a 2-connected graph with an empty side."""
    if len(graph.vertices) == 2:
        return graph.has_edge(s, t)
    if validate(graph, embedding):
        return False
    try:
        upper, lower = sides(embedding, s, t)
    except GraphError:
        return False
    return graph.has_edge(s, t) and (not upper or not lower)

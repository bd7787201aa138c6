"""JSON instance files.

Schema::

    {"name": ..., "vertices": [...], "boundary": [...],
     "edges": [{"u": ..., "v": ..., "w": "3/2"}, ...],
     "source": ..., "target": ...,
     "blocked": ["u-v", ...], "universe": ["u-v", ...], "k": 3,
     "notes": {...}}

`blocked`, `universe`, `k` and `notes` are optional.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .graph import OuterEmbedding, RoadMap, WeightedGraph, edge_label, parse_edge_label

__all__ = ["Instance", "load_instance", "dump_instance", "loads_instance", "dumps_instance",
           "rational", "fixture", "FIXTURES"]

FIXTURES = ("fig3", "fig5", "fig6")


def rational(x):
    """Serialize a Fraction as ``p/q`` (or ``p`` when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Instance:
    name: str
    roadmap: RoadMap
    universe: frozenset = None
    k: int = None
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def graph(self):
        return self.roadmap.graph

    @property
    def embedding(self):
        return self.roadmap.embedding

    @property
    def source(self):
        return self.roadmap.source

    @property
    def target(self):
        return self.roadmap.target

    @property
    def blocked(self):
        return self.roadmap.blocked

    def budget(self):
        """Blockage budget: explicit `k`, else the size of the blocked set."""
        return self.k if self.k is not None else len(self.roadmap.blocked)


def _from_dict(d):
    vertices = [str(v) for v in d["vertices"]]
    vs = set(vertices)
    edges = [(str(e["u"]), str(e["v"]), Fraction(str(e.get("w", "1")))) for e in d["edges"]]
    graph = WeightedGraph(vertices, edges)
    emb = OuterEmbedding(tuple(str(v) for v in d["boundary"]))
    blocked = frozenset(parse_edge_label(x, vs) for x in d.get("blocked", []))
    rm = RoadMap(graph, emb, str(d["source"]), str(d["target"]), blocked)
    universe = d.get("universe")
    if universe is not None:
        universe = frozenset(parse_edge_label(x, vs) for x in universe)
    k = d.get("k")
    return Instance(d.get("name", "instance"), rm, universe, k, d.get("notes", {}))


def _to_dict(inst):
    rm = inst.roadmap
    d = {
        "name": inst.name,
        "vertices": sorted(rm.graph.vertices),
        "boundary": list(rm.embedding.boundary),
        "edges": [{"u": u, "v": v, "w": rational(w)} for (u, v), w in sorted(rm.graph.edges.items())],
        "source": rm.source,
        "target": rm.target,
        "blocked": sorted(edge_label(e) for e in rm.blocked),
    }
    if inst.universe is not None:
        d["universe"] = sorted(edge_label(e) for e in inst.universe)
    if inst.k is not None:
        d["k"] = inst.k
    if inst.notes:
        d["notes"] = inst.notes
    return d


def loads_instance(text):
    return _from_dict(json.loads(text))


def dumps_instance(inst):
    return json.dumps(_to_dict(inst), indent=2, sort_keys=False) + "\n"


def load_instance(path):
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def dump_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


def fixture(name):
    """Load one of the bundled figure instances (``fig3``, ``fig5``, ``fig6``)."""
    if name not in FIXTURES:
        raise KeyError(name)
    text = resources.files("ctp_outerplanar").joinpath("data", f"{name}.json").read_text("utf-8")
    return loads_instance(text)

"""JSON instance format and exact serialization of results.

Instance schema::

    {"vertices": [{"id": "a", "capacity": 2}, ...],
     "edges": [{"u": "a", "v": "b", "weight": "1/2"}, ...],
     "matching": [["a", "b"], ...]}          # optional

Weights are written as exact fraction strings.  Capacities are written as
declared on input, even when normalization clamped them.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from fractions import Fraction

from .graph import Instance, InstanceError, edge_key, validate_instance


def load_instance(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError(["instance must be a JSON object"])
    problems = []
    vertices, caps = [], {}
    for i, item in enumerate(data.get("vertices", [])):
        if not isinstance(item, dict) or "id" not in item:
            problems.append(f"vertex #{i}: expected an object with an id")
            continue
        vid = str(item["id"])
        vertices.append(vid)
        caps[vid] = item.get("capacity", 1)
    edges = []
    for i, item in enumerate(data.get("edges", [])):
        if not isinstance(item, dict) or "u" not in item or "v" not in item:
            problems.append(f"edge #{i}: expected an object with u and v")
            continue
        edges.append((str(item["u"]), str(item["v"]), item.get("weight", "1")))
    if problems:
        raise InstanceError(problems)
    graph = validate_instance(vertices, caps, edges)
    matching = None
    if data.get("matching") is not None:
        keys = []
        for pair in data["matching"]:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise InstanceError([f"matching entry {pair!r} is not a pair"])
            k = edge_key(str(pair[0]), str(pair[1]))
            if not graph.has_edge(k):
                raise InstanceError([f"matching edge {pair[0]}-{pair[1]} is not in the graph"])
            if k in keys:
                raise InstanceError([f"matching edge {pair[0]}-{pair[1]} listed twice"])
            keys.append(k)
        matching = frozenset(keys)
    return Instance(graph, matching)


def dump_instance(instance: Instance) -> dict:
    g = instance.graph
    declared = g.declared_capacity if g.declared_capacity is not None else g.capacity
    out = {
        "vertices": [{"id": str(v), "capacity": declared[v]} for v in g.vertices],
        "edges": [{"u": str(u), "v": str(v), "weight": str(w)} for u, v, w in g.edges],
    }
    if instance.matching is not None:
        out["matching"] = [list(map(str, g.endpoints(k))) for k in g.sorted_edges(instance.matching)]
    return out


def read_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError([f"malformed JSON: {exc}"]) from None
    return load_instance(data)


def edge_name(k) -> str:
    return "-".join(sorted(map(str, k)))


def to_jsonable(obj):
    """Exact, deterministic JSON view: fractions become strings, edge keys
    become ``"u-v"`` names, sets are sorted."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, frozenset) and all(not isinstance(x, frozenset) for x in obj) and len(obj) == 2:
        return edge_name(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "to_json"):
            return to_jsonable(obj.to_json())
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {(edge_name(k) if isinstance(k, frozenset) else str(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(x) for x in obj), key=lambda x: json.dumps(x, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")

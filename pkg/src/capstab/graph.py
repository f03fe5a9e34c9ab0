"""Weighted, vertex-capacitated graphs and c-matchings.

All weights are kept as :class:`fractions.Fraction` so that value
comparisons (``w(M) == nu_f``) are exact.  Edges are identified by the
frozenset of their two endpoints; vertex ids may be any hashable value
(strings for user instances, ``(vertex, index)`` tuples for copy graphs).
"""

from __future__ import annotations

import enum
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

Vertex = Hashable
EdgeKey = frozenset


def edge_key(u: Vertex, v: Vertex) -> EdgeKey:
    return frozenset((u, v))


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` / decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a weight")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        # floats only reach here from hand-written JSON; go through repr so
        # that 0.5 -> 1/2 rather than the binary expansion
        return Fraction(repr(value))
    raise TypeError(f"cannot interpret {value!r} as a rational weight")


class InstanceError(ValueError):
    """Structural problems with an instance; ``violations`` lists each one."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class VertexStatus(enum.Enum):
    EXPOSED = "exposed"
    COVERED_UNSATURATED = "covered-unsaturated"
    SATURATED = "saturated"


@dataclass(frozen=True)
class CapacitatedGraph:
    """Simple undirected graph with integer capacities and rational weights.

    ``vertices`` fixes the canonical order; ``edges`` holds ``(u, v, w)``
    triples in canonical order.  Capacities are *not* clamped here; use
    :func:`validate_instance` or :meth:`normalized` for that.
    ``declared_capacity`` remembers the capacities as read from a file.
    """

    vertices: tuple
    capacity: Mapping
    edges: tuple
    declared_capacity: Mapping | None = field(default=None, compare=False)
    _weight: dict = field(init=False, repr=False, compare=False)
    _order: dict = field(init=False, repr=False, compare=False)
    _vorder: dict = field(init=False, repr=False, compare=False)
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weight: dict = {}
        order: dict = {}
        adj: dict = {v: [] for v in self.vertices}
        for idx, (u, v, w) in enumerate(self.edges):
            k = edge_key(u, v)
            weight[k] = w
            order[k] = idx
            adj[u].append((v, k))
            adj[v].append((u, k))
        object.__setattr__(self, "_weight", weight)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_vorder", {v: i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "_adj", {v: tuple(a) for v, a in adj.items()})

    # -- lookups -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_keys(self) -> list[EdgeKey]:
        return [edge_key(u, v) for u, v, _ in self.edges]

    def has_vertex(self, v) -> bool:
        return v in self._vorder

    def has_edge(self, k: EdgeKey) -> bool:
        return k in self._weight

    def w(self, k: EdgeKey) -> Fraction:
        try:
            return self._weight[k]
        except KeyError:
            raise KeyError(f"unknown edge {sorted(map(str, k))}") from None

    def key(self, u, v) -> EdgeKey:
        """Edge key for ``uv``, raising if the edge is absent."""
        k = edge_key(u, v)
        if k not in self._weight:
            raise KeyError(f"no edge {u!r}-{v!r}")
        return k

    def edge_index(self, k: EdgeKey) -> int:
        return self._order[k]

    def vertex_index(self, v) -> int:
        return self._vorder[v]

    def neighbors(self, v) -> tuple:
        """``(neighbour, edge key)`` pairs in canonical edge order."""
        return self._adj[v]

    def endpoints(self, k: EdgeKey) -> tuple:
        u, v, _ = self.edges[self._order[k]]
        return u, v

    def graph_degree(self, v) -> int:
        return len(self._adj[v])

    def sorted_edges(self, keys: Iterable[EdgeKey]) -> list[EdgeKey]:
        return sorted(keys, key=self._order.__getitem__)

    def sorted_vertices(self, vs: Iterable) -> list:
        return sorted(vs, key=self._vorder.__getitem__)

    def normalized(self) -> "CapacitatedGraph":
        """Copy with every capacity clamped to the vertex degree."""
        cap = {v: min(self.capacity[v], self.graph_degree(v)) for v in self.vertices}
        declared = self.declared_capacity if self.declared_capacity is not None else dict(self.capacity)
        return CapacitatedGraph(self.vertices, cap, self.edges, declared)

    def with_capacities(self, capacity: Mapping) -> "CapacitatedGraph":
        return CapacitatedGraph(self.vertices, dict(capacity), self.edges)


def find_violations(vertices, capacity: Mapping, edges) -> list[str]:
    problems = []
    seen_v = set()
    for v in vertices:
        if v in seen_v:
            problems.append(f"duplicate vertex {v!r}")
        seen_v.add(v)
        c = capacity.get(v)
        if c is None:
            problems.append(f"vertex {v!r}: missing capacity")
        elif isinstance(c, bool) or not isinstance(c, int):
            problems.append(f"vertex {v!r}: capacity {c!r} is not an integer")
        elif c < 0:
            problems.append(f"vertex {v!r}: negative capacity {c}")
    seen_e = set()
    for idx, (u, v, w) in enumerate(edges):
        where = f"edge #{idx} ({u!r},{v!r})"
        if u == v:
            problems.append(f"{where}: self-loop")
        for x in (u, v):
            if x not in seen_v:
                problems.append(f"{where}: unknown endpoint {x!r}")
        k = edge_key(u, v)
        if u != v and k in seen_e:
            problems.append(f"{where}: duplicate edge")
        seen_e.add(k)
        try:
            if as_fraction(w) < 0:
                problems.append(f"{where}: negative weight {w}")
        except (TypeError, ValueError, ZeroDivisionError):
            problems.append(f"{where}: bad weight {w!r}")
    return problems


def validate_instance(vertices, capacity: Mapping, edges) -> CapacitatedGraph:
    """Build a normalized graph or raise :class:`InstanceError`.

    Normalization keeps the input vertex order and clamps every capacity
    to the vertex degree.
    """
    vertices = list(vertices)
    edges = list(edges)
    problems = find_violations(vertices, capacity, edges)
    if problems:
        raise InstanceError(problems)
    triples = tuple((u, v, as_fraction(w)) for u, v, w in edges)
    raw = CapacitatedGraph(tuple(vertices), {v: capacity[v] for v in vertices}, triples)
    return raw.normalized()


def graph_from_edges(edges, capacity: Mapping | int = 1, vertices=None) -> CapacitatedGraph:
    """Convenience builder: ``edges`` as ``(u, v)`` or ``(u, v, w)`` tuples."""
    triples = [(e[0], e[1], e[2] if len(e) > 2 else 1) for e in edges]
    if vertices is None:
        vertices = []
        for u, v, _ in triples:
            for x in (u, v):
                if x not in vertices:
                    vertices.append(x)
    if isinstance(capacity, int):
        capacity = {v: capacity for v in vertices}
    return validate_instance(vertices, capacity, triples)


# -- c-matchings ---------------------------------------------------------

def degree(graph: CapacitatedGraph, v, edges: Iterable[EdgeKey]) -> int:
    """Number of members of ``edges`` incident to ``v`` (multiset aware)."""
    if not graph.has_vertex(v):
        raise KeyError(f"unknown vertex {v!r}")
    return sum(1 for k in edges if v in k)


def degrees(edges: Iterable[EdgeKey]) -> dict:
    d: dict = {}
    for k in edges:
        for x in k:
            d[x] = d.get(x, 0) + 1
    return d


def check_edges(graph: CapacitatedGraph, edges: Iterable[EdgeKey]) -> None:
    for k in edges:
        if not graph.has_edge(k):
            raise KeyError(f"unknown edge {sorted(map(str, k))}")


def is_c_matching(graph: CapacitatedGraph, edges: Iterable[EdgeKey]) -> bool:
    edges = list(edges)
    check_edges(graph, edges)
    if len(set(edges)) != len(edges):
        return False
    d = degrees(edges)
    return all(d[v] <= graph.capacity[v] for v in d)


def weight(graph: CapacitatedGraph, items) -> Fraction:
    """Exact weight of an edge collection, or of a fractional vector."""
    if isinstance(items, Mapping):
        return sum((graph.w(k) * Fraction(x) for k, x in items.items()), Fraction(0))
    return sum((graph.w(k) for k in items), Fraction(0))


def is_fractional_c_matching(graph: CapacitatedGraph, x: Mapping) -> bool:
    load: dict = {}
    for k, val in x.items():
        if not graph.has_edge(k):
            raise KeyError(f"unknown edge {sorted(map(str, k))}")
        if val < 0 or val > 1:
            return False
        for v in k:
            load[v] = load.get(v, 0) + val
    return all(load[v] <= graph.capacity[v] for v in load)


def vertex_status(graph: CapacitatedGraph, matching: Iterable[EdgeKey], v) -> VertexStatus:
    d = degree(graph, v, matching)
    if d > graph.capacity[v]:
        raise ValueError(f"vertex {v!r} exceeds its capacity")
    # a capacity-0 vertex is reported as exposed: it is not covered
    if d == 0:
        return VertexStatus.EXPOSED
    if d == graph.capacity[v]:
        return VertexStatus.SATURATED
    return VertexStatus.COVERED_UNSATURATED


def induced_subgraph(graph: CapacitatedGraph, keep: Iterable, reclamp: bool = True) -> CapacitatedGraph:
    """Subgraph induced by ``keep`` (order taken from ``graph``).

    With ``reclamp`` the capacities are clamped to the new degrees; without
    it they are carried over unchanged, which is what the copy-graph
    bookkeeping needs.
    """
    keep = set(keep)
    for v in keep:
        if not graph.has_vertex(v):
            raise KeyError(f"unknown vertex {v!r}")
    vs = tuple(v for v in graph.vertices if v in keep)
    es = tuple(e for e in graph.edges if e[0] in keep and e[1] in keep)
    declared = graph.declared_capacity if graph.declared_capacity is not None else graph.capacity
    sub = CapacitatedGraph(vs, {v: graph.capacity[v] for v in vs}, es, {v: declared[v] for v in vs})
    return sub.normalized() if reclamp else sub


def remove_vertices(graph: CapacitatedGraph, drop: Iterable, reclamp: bool = True) -> CapacitatedGraph:
    drop = set(drop)
    for v in drop:
        if not graph.has_vertex(v):
            raise KeyError(f"unknown vertex {v!r}")
    return induced_subgraph(graph, [v for v in graph.vertices if v not in drop], reclamp)


@dataclass(frozen=True)
class Instance:
    """A graph together with an optional c-matching."""

    graph: CapacitatedGraph
    matching: frozenset | None = None

    def __post_init__(self):
        if self.matching is not None:
            object.__setattr__(self, "matching", frozenset(self.matching))
            if not is_c_matching(self.graph, self.matching):
                raise InstanceError(["matching violates a vertex capacity"])

    def covered(self, v) -> bool:
        return self.matching is not None and any(v in k for k in self.matching)

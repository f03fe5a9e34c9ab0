"""Unit-capacity copy graph of a capacitated instance.

Every vertex ``v`` becomes the copies ``(v, 1) .. (v, c_v)``.  Each matched
edge is realised by a single copy edge between the lowest still-free
copies of its endpoints (edges taken in canonical order); each unmatched
edge ``uv`` is realised by all ``c_u * c_v`` copy pairs.  The map ``eta``
sends copies and copy edges back to the original graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CapacitatedGraph, Instance, edge_key, remove_vertices
from .walks import Walk, WalkError, check_walk, gain, is_alternating, is_proper_trail


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class AuxiliaryBundle:
    g_prime: CapacitatedGraph
    m_prime: frozenset
    copy_classes: dict   # original vertex -> tuple of copies
    eta_edge: dict       # copy edge key -> original edge key

    def eta_vertex(self, copy):
        return copy[0]

    @property
    def exposed_copies(self) -> list:
        covered = {x for k in self.m_prime for x in k}
        return [x for x in self.g_prime.vertices if x not in covered]

    def to_json(self) -> dict:
        def name(c):
            return f"{c[0]}_{c[1]}"

        return {
            "copy_classes": {str(v): [name(c) for c in cs] for v, cs in self.copy_classes.items()},
            "edges": [{"u": name(a), "v": name(b), "eta": sorted(map(str, self.eta_edge[edge_key(a, b)])),
                       "matched": edge_key(a, b) in self.m_prime}
                      for a, b, _ in self.g_prime.edges],
        }


def build_auxiliary(instance: Instance) -> AuxiliaryBundle:
    graph = instance.graph
    matching = instance.matching or frozenset()
    classes = {v: tuple((v, i) for i in range(1, graph.capacity[v] + 1)) for v in graph.vertices}
    free = {v: list(cs) for v, cs in classes.items()}
    verts = [c for v in graph.vertices for c in classes[v]]
    edges = []
    eta = {}
    m_prime = []
    for u, v, w in graph.edges:
        k = edge_key(u, v)
        if k in matching:
            a, b = free[u].pop(0), free[v].pop(0)
            edges.append((a, b, w))
            eta[edge_key(a, b)] = k
            m_prime.append(edge_key(a, b))
        else:
            for a in classes[u]:
                for b in classes[v]:
                    edges.append((a, b, w))
                    eta[edge_key(a, b)] = k
    g_prime = CapacitatedGraph(tuple(verts), {c: 1 for c in verts}, tuple(edges))
    return AuxiliaryBundle(g_prime, frozenset(m_prime), classes, eta)


def eta_map(bundle: AuxiliaryBundle, obj):
    """Image of a copy walk, copy edge, or copy vertex."""
    if isinstance(obj, Walk):
        return Walk(tuple(x[0] for x in obj.nodes))
    if isinstance(obj, frozenset):
        return bundle.eta_edge[obj]
    return bundle.eta_vertex(obj)


def remove_original_vertex(bundle: AuxiliaryBundle, instance: Instance, v) -> tuple[AuxiliaryBundle, Instance]:
    """Delete an exposed vertex from both the instance and its copy graph.

    Capacities of the survivors are carried over unchanged so that the
    result coincides with building the copy graph of the reduced instance.
    """
    if not instance.graph.has_vertex(v):
        raise KeyError(f"unknown vertex {v!r}")
    if instance.covered(v):
        raise PreconditionError(f"vertex {v!r} is covered by the matching")
    graph = remove_vertices(instance.graph, [v], reclamp=False)
    new_instance = Instance(graph, instance.matching)
    g_prime = remove_vertices(bundle.g_prime, bundle.copy_classes[v], reclamp=False)
    classes = {x: cs for x, cs in bundle.copy_classes.items() if x != v}
    eta = {k: e for k, e in bundle.eta_edge.items() if v not in e}
    return AuxiliaryBundle(g_prime, bundle.m_prime, classes, eta), new_instance


@dataclass(frozen=True)
class Tie:
    first: frozenset
    second: frozenset
    positions: tuple


def find_ties(bundle: AuxiliaryBundle, path: Walk) -> list[Tie]:
    """Pairs of distinct unmatched copy edges on ``path`` with the same image."""
    edges = check_walk(bundle.g_prime, path)
    ties = []
    for i in range(len(edges)):
        if edges[i] in bundle.m_prime:
            continue
        for j in range(i + 1, len(edges)):
            if edges[j] in bundle.m_prime or edges[j] == edges[i]:
                continue
            if bundle.eta_edge[edges[i]] == bundle.eta_edge[edges[j]]:
                ties.append(Tie(edges[i], edges[j], (i, j)))
    return ties


def _first_opposite_repeat(walk: Walk) -> tuple[int, int]:
    """1-based ``(s, t)``: least ``t`` with ``e_t`` the reverse of an earlier ``e_s``."""
    x = walk.nodes
    for t in range(1, len(x)):
        for s in range(1, t):
            if x[s - 1] == x[t] and x[s] == x[t - 1]:
                return s, t
    raise PreconditionError("walk repeats no edge in opposite directions")


def traceback(walk: Walk, endpoint: str) -> Walk:
    """Walk surgery at the first oppositely traversed repeated edge.

    ``endpoint="first"`` keeps the prefix up to the repeat and walks back to
    the start; ``"last"`` does the same from the end of the walk.
    """
    s, t = _first_opposite_repeat(walk)
    x = walk.nodes
    k = len(x) - 1
    if endpoint == "first":
        return Walk(x[:t + 1] + x[s - 2::-1] if s >= 2 else x[:t + 1])
    if endpoint == "last":
        return Walk(x[k:s - 2:-1] + x[t + 1:] if s >= 2 else x[::-1] + x[t + 1:])
    raise ValueError("endpoint must be 'first' or 'last'")


def check_traceback_preconditions(instance: Instance, bundle: AuxiliaryBundle, path: Walk) -> list[str]:
    problems = []
    try:
        check_walk(bundle.g_prime, path)
    except WalkError as exc:
        return [str(exc)]
    if not path.is_path() or len(path) == 0:
        problems.append("not a nonempty path")
    if not is_alternating(bundle.g_prime, bundle.m_prime, path):
        problems.append("not M'-alternating")
    elif gain(bundle.g_prime, bundle.m_prime, path) <= 0:
        problems.append("not M'-augmenting")
    if not is_proper_trail(bundle.g_prime, bundle.m_prime, path):
        problems.append("not proper")
    covered = {x for k in bundle.m_prime for x in k}
    if path.start in covered:
        problems.append("first endpoint is M'-covered")
    if path.end in covered:
        problems.append("last endpoint is M'-covered")
    if path.start[0] == path.end[0]:
        problems.append("endpoints have the same image")
    return problems


def both_tracebacks(instance: Instance, bundle: AuxiliaryBundle, path: Walk) -> tuple[Walk, Walk]:
    image = eta_map(bundle, path)
    return traceback(image, "first"), traceback(image, "last")


def augmenting_traceback(instance: Instance, bundle: AuxiliaryBundle, path: Walk) -> tuple:
    """An endpoint image whose traceback is augmenting, first endpoint preferred."""
    problems = check_traceback_preconditions(instance, bundle, path)
    if problems:
        raise PreconditionError("; ".join(problems))
    first, last = both_tracebacks(instance, bundle, path)
    matching = instance.matching or frozenset()
    if gain(instance.graph, matching, first) > 0:
        return path.start[0], first
    if gain(instance.graph, matching, last) > 0:
        return path.end[0], last
    raise PreconditionError("neither traceback is augmenting; is the matching maximum?")

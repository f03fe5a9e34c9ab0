"""Named fixtures, seeded random instances, and the independent-dominating-set
reduction together with small exact and greedy IDS solvers."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import CapacitatedGraph, Instance, edge_key, graph_from_edges, is_c_matching, validate_instance


# -- fixtures ---------------------------------------------------------------

def _fig1() -> Instance:
    half = Fraction(1, 2)
    edges = [("t", "u", 1), ("u", "v", 1), ("v", "x", 1), ("x", "y", 1), ("x", "z", 1),
             ("y", "z", 1), ("a", "b", 1), ("b", "c", half), ("c", "v", 1)]
    verts = ["t", "u", "v", "x", "y", "z", "a", "b", "c"]
    caps = {v: 1 for v in verts}
    caps.update(v=2, x=2, b=2)
    g = validate_instance(verts, caps, edges)
    m = [("u", "v"), ("x", "y"), ("x", "z"), ("a", "b"), ("c", "v")]
    return Instance(g, frozenset(edge_key(*e) for e in m))


def _fig5() -> Instance:
    verts = ["1", "2", "3", "4"]
    caps = {"1": 2, "2": 2, "3": 2, "4": 1}
    edges = [("1", "2", 1), ("1", "3", 1), ("2", "3", 1), ("2", "4", 1), ("3", "4", 1)]
    g = validate_instance(verts, caps, edges)
    return Instance(g, frozenset(edge_key(*e) for e in [("1", "2"), ("1", "3"), ("2", "3")]))


def _cycle(n: int) -> CapacitatedGraph:
    vs = [str(i) for i in range(1, n + 1)]
    return graph_from_edges([(vs[i], vs[(i + 1) % n]) for i in range(n)], vertices=vs)


FIXTURES = {
    "fig1": _fig1,
    "fig5": _fig5,
    "triangle": lambda: Instance(_cycle(3)),
    "c5": lambda: Instance(_cycle(5)),
    "edge": lambda: Instance(graph_from_edges([("u", "v")]), frozenset({edge_key("u", "v")})),
    "path3": lambda: Instance(graph_from_edges([("u", "v"), ("v", "w")]), frozenset({edge_key("u", "v")})),
    "star": lambda: Instance(graph_from_edges([("c", "1"), ("c", "2"), ("c", "3")])),
    "k4": lambda: Instance(graph_from_edges([(a, b) for a, b in itertools.combinations("1234", 2)])),
    "empty": lambda: Instance(validate_instance([], {}, [])),
}


def fixtures(name: str) -> Instance:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None


# -- random instances -----------------------------------------------------------

def gen_random(n: int, density: float, cap_range: tuple = (1, 1), weights=(1,), seed: int = 0) -> CapacitatedGraph:
    """Seeded random instance on vertices ``"0" .. str(n-1)``.

    Uses :class:`random.Random` (Mersenne Twister), whose output for a given
    integer seed is fixed across platforms.  Pairs ``i < j`` are visited in
    lexicographic order; each is kept with probability ``density`` and then
    draws a weight from ``weights``; capacities are drawn afterwards.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    lo, hi = cap_range
    if lo < 0 or hi < lo:
        raise ValueError("bad capacity range")
    weights = [Fraction(w) for w in weights]
    if not weights or any(w < 0 for w in weights):
        raise ValueError("weights must be a nonempty set of nonnegative rationals")
    rng = random.Random(seed)
    verts = [str(i) for i in range(n)]
    edges = []
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < density:
            edges.append((verts[i], verts[j], rng.choice(weights)))
    caps = {v: rng.randint(lo, hi) for v in verts}
    return validate_instance(verts, caps, edges)


def random_c_matching(graph: CapacitatedGraph, seed: int, keep: float = 0.5) -> frozenset:
    """Random c-matching: edges in shuffled order, each kept with prob. ``keep`` if it fits."""
    rng = random.Random(seed)
    keys = graph.edge_keys()
    rng.shuffle(keys)
    room = dict(graph.capacity)
    chosen = []
    for k in keys:
        u, v = tuple(k)
        if room[u] and room[v] and rng.random() < keep:
            room[u] -= 1
            room[v] -= 1
            chosen.append(k)
    return frozenset(chosen)


# -- independent dominating sets ---------------------------------------------------

@dataclass(frozen=True)
class MidsInstance:
    """Plain simple graph."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex")
        seen = set()
        for u, v in self.edges:
            if u == v or u not in vs or v not in vs or edge_key(u, v) in seen:
                raise ValueError(f"bad edge ({u!r},{v!r})")
            seen.add(edge_key(u, v))

    def closed_neighborhood(self, v) -> list:
        out = [v]
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out


def is_independent_dominating(src: MidsInstance, s) -> bool:
    s = set(s)
    if any(u in s and v in s for u, v in src.edges):
        return False
    return all(any(u in s for u in src.closed_neighborhood(v)) for v in src.vertices)


def all_minimum_ids(src: MidsInstance, limit: int = 20) -> list:
    if len(src.vertices) > limit:
        raise ValueError(f"too large for exhaustive search ({len(src.vertices)} > {limit})")
    for size in range(len(src.vertices) + 1):
        found = [frozenset(c) for c in itertools.combinations(src.vertices, size)
                 if is_independent_dominating(src, c)]
        if found:
            return found
    return []


def mids_bruteforce(src: MidsInstance, limit: int = 20) -> frozenset:
    """First minimum IDS in canonical combination order."""
    found = all_minimum_ids(src, limit)
    return found[0] if found else frozenset()


def greedy_ids(src: MidsInstance) -> frozenset:
    """Maximal independent set built in vertex order (hence dominating)."""
    chosen: set = set()
    for v in src.vertices:
        if not any(u in chosen for u in src.closed_neighborhood(v)):
            chosen.add(v)
    return frozenset(chosen)


@dataclass(frozen=True)
class ReducedInstance:
    graph: CapacitatedGraph
    source: MidsInstance
    gadget: dict  # vertex id -> gadget label ("V" for source vertices)


def build_mids_reduction(src: MidsInstance) -> ReducedInstance:
    """Unit-weight capacitated instance whose minimum vertex stabilizer
    mirrors the minimum independent dominating set of ``src``.

    Vertex gadget for ``v``: ``v#1 .. v#4`` with the edges ``u - v#1`` for
    ``u`` in the closed neighbourhood, plus ``v#1 v#2``, ``v#2 v#3``,
    ``v#3 v#4``, ``v#2 v#4``.  Edge gadget ``i`` for ``uv``:
    ``u~v#i.1 .. u~v#i.5`` attached to both ``u`` and ``v`` through
    ``u~v#i.1``.
    """
    n = len(src.vertices)
    if n < 1:
        raise ValueError("source needs at least one vertex")
    verts = list(src.vertices)
    gadget = {v: "V" for v in src.vertices}
    edges = []
    deg = {v: 0 for v in src.vertices}
    for u, v in src.edges:
        deg[u] += 1
        deg[v] += 1
    caps: dict = {}
    for v in src.vertices:
        g = [f"{v}#{k}" for k in range(1, 5)]
        verts.extend(g)
        for x in g:
            gadget[x] = f"vertex:{v}"
        for u in src.closed_neighborhood(v):
            edges.append((u, g[0]))
        edges += [(g[0], g[1]), (g[1], g[2]), (g[2], g[3]), (g[1], g[3])]
        caps[g[0]] = deg[v] + 1
    for u, v in src.edges:
        for i in range(1, n + 1):
            e = [f"{u}~{v}#{i}.{k}" for k in range(1, 6)]
            verts.extend(e)
            for x in e:
                gadget[x] = f"edge:{u}~{v}:{i}"
            edges += [(u, e[0]), (v, e[0]), (e[0], e[1]), (e[0], e[2]),
                      (e[2], e[3]), (e[3], e[4]), (e[2], e[4])]
            caps[e[0]] = 2
            caps[e[2]] = 2
    gdeg = {x: 0 for x in verts}
    for a, b in edges:
        gdeg[a] += 1
        gdeg[b] += 1
    for v in src.vertices:
        caps[v] = gdeg[v]
    for x in verts:
        caps.setdefault(x, 1)
    g = validate_instance(verts, caps, [(a, b, 1) for a, b in edges])
    return ReducedInstance(g, src, gadget)


def all_maximum_c_matchings(graph: CapacitatedGraph, limit: int = 10000) -> list:
    """Every maximum-weight c-matching, in enumeration order (small graphs)."""
    from .solvers import max_weight_c_matching

    _, best = max_weight_c_matching(graph)
    keys = graph.edge_keys()
    weights = [graph.w(k) for k in keys]
    suffix = [Fraction(0)] * (len(keys) + 1)
    for i in range(len(keys) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]
    room = dict(graph.capacity)
    found: list = []
    chosen: list = []

    def rec(i, acc):
        if len(found) >= limit or acc + suffix[i] < best:
            return
        if i == len(keys):
            found.append(frozenset(chosen))
            return
        u, v = tuple(keys[i])
        if room[u] and room[v]:
            room[u] -= 1
            room[v] -= 1
            chosen.append(keys[i])
            rec(i + 1, acc + weights[i])
            chosen.pop()
            room[u] += 1
            room[v] += 1
        rec(i + 1, acc)

    rec(0, Fraction(0))
    return found


def random_maximum_c_matching(graph: CapacitatedGraph, seed: int) -> frozenset:
    return random.Random(seed).choice(all_maximum_c_matchings(graph))


def gen_planted(seed: int, stems: tuple = (1, 1), chord_density: float = 0.05,
                weights=(1,), extra_capacity: float = 0.0) -> Instance:
    """Seeded instance built around a capacitated blossom.

    The skeleton is an alternating stem from ``u`` into ``a``, the edge
    ``a - b``, a triangle ``b c d`` and a second stem from ``a`` out to
    ``v``; ``stems`` gives the number of (unmatched, matched) edge pairs on
    each stem, ``a`` and ``b`` get capacity at least 2.  Random chords,
    weights, extra capacity and a shuffled vertex order are layered on top.
    The planted matching (every second stem edge plus the two triangle
    edges at ``b``) is returned with the graph; it need not be maximum.
    Plain random graphs of this size rarely produce walks whose image
    crosses an edge twice in opposite directions; this family does so
    regularly.
    """
    rng = random.Random(seed)
    left = ["u"] + [f"p{i}" for i in range(2 * stems[0] - 1)] + ["a"]
    right = ["a"] + [f"q{i}" for i in range(2 * stems[1] - 1)] + ["v"]
    names = left + ["b", "c", "d"] + right[1:]
    skeleton = list(zip(left, left[1:])) + [("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")] + list(zip(right, right[1:]))
    n = len(names)
    order = list(range(n))
    rng.shuffle(order)
    label = {nm: str(order[i]) for i, nm in enumerate(names)}
    present = {edge_key(label[x], label[y]) for x, y in skeleton}
    edges = [(label[x], label[y]) for x, y in skeleton]
    for i, j in itertools.combinations(range(n), 2):
        if edge_key(str(i), str(j)) not in present and rng.random() < chord_density:
            edges.append((str(i), str(j)))
    edges.sort(key=lambda e: sorted((int(e[0]), int(e[1]))))
    weights = [Fraction(w) for w in weights]
    triples = [(x, y, rng.choice(weights)) for x, y in edges]
    caps = {str(i): 2 if rng.random() < extra_capacity else 1 for i in range(n)}
    caps[label["a"]] = rng.choice((2, 2, 3))
    caps[label["b"]] = rng.choice((2, 2, 3))
    graph = validate_instance([str(i) for i in range(n)], caps, triples)
    matched = list(zip(left, left[1:]))[1::2] + [("b", "c"), ("d", "b")] + list(zip(right, right[1:]))[0::2]
    matching = frozenset(edge_key(label[x], label[y]) for x, y in matched)
    if not is_c_matching(graph, matching):
        raise AssertionError("planted matching exceeds a capacity")
    return Instance(graph, matching)

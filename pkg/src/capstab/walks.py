"""Alternating walks: gain accounting, epsilon-augmentation, walk search and
decomposition into basic augmenting structures.

A walk is stored as its vertex sequence; since graphs are simple, the
sequence determines the edges.  The search and decomposition routines
assume a unit-capacity host graph (every vertex has at most one matched
edge); the accounting helpers work on any capacitated graph.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .graph import CapacitatedGraph, edge_key, weight


class WalkError(ValueError):
    pass


class MalformedStructure(ValueError):
    pass


@dataclass(frozen=True)
class Walk:
    """A walk given by its vertex sequence ``nodes[0] .. nodes[-1]``."""

    nodes: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not self.nodes:
            raise WalkError("a walk needs at least its start vertex")

    @classmethod
    def from_steps(cls, start, steps) -> "Walk":
        nodes = [start]
        for u, v in steps:
            if u != nodes[-1]:
                raise WalkError(f"step ({u!r},{v!r}) does not continue from {nodes[-1]!r}")
            nodes.append(v)
        return cls(tuple(nodes))

    @property
    def start(self):
        return self.nodes[0]

    @property
    def end(self):
        return self.nodes[-1]

    @property
    def steps(self) -> list[tuple]:
        return list(zip(self.nodes, self.nodes[1:]))

    @property
    def edges(self) -> list:
        return [edge_key(u, v) for u, v in self.steps]

    def __len__(self) -> int:
        return len(self.nodes) - 1

    @property
    def closed(self) -> bool:
        return self.nodes[0] == self.nodes[-1]

    def reversed(self) -> "Walk":
        return Walk(self.nodes[::-1])

    def then(self, other: "Walk") -> "Walk":
        if other.start != self.end:
            raise WalkError("walks do not meet")
        return Walk(self.nodes + other.nodes[1:])

    def is_trail(self) -> bool:
        es = self.edges
        return len(set(es)) == len(es)

    def is_path(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)

    def is_cycle(self) -> bool:
        return len(self) >= 3 and self.closed and len(set(self.nodes[:-1])) == len(self)

    def to_json(self) -> dict:
        return {"start": self.start, "steps": [list(s) for s in self.steps]}


def check_walk(graph: CapacitatedGraph, walk: Walk) -> list:
    for u, v in walk.steps:
        if not graph.has_edge(edge_key(u, v)):
            raise WalkError(f"{u!r}-{v!r} is not an edge of the graph")
    return walk.edges


# -- accounting -----------------------------------------------------------

def is_alternating(graph: CapacitatedGraph, matching, walk: Walk) -> bool:
    flags = [k in matching for k in check_walk(graph, walk)]
    return all(a != b for a, b in zip(flags, flags[1:]))


def gain(graph: CapacitatedGraph, matching, walk: Walk) -> Fraction:
    """``w(W \\ M) - w(W & M)`` with multiplicity."""
    total = Fraction(0)
    for k in check_walk(graph, walk):
        total += -graph.w(k) if k in matching else graph.w(k)
    return total


def is_augmenting(graph, matching, walk: Walk) -> bool:
    return is_alternating(graph, matching, walk) and gain(graph, matching, walk) > 0


def epsilon_augmentation(graph: CapacitatedGraph, matching, walk: Walk) -> tuple[Fraction, dict]:
    """Largest feasible ``eps`` for the walk and the vector at that ``eps``.

    Returns ``(0, indicator of M)`` when no positive ``eps`` keeps the
    perturbed vector a fractional c-matching.
    """
    kappa = Counter(check_walk(graph, walk))
    base = {k: Fraction(1) for k in matching}
    if not kappa:
        return Fraction(0), base
    bounds = [Fraction(1, c) for c in kappa.values()]
    load_change: Counter = Counter()
    for k, c in kappa.items():
        sign = -1 if k in matching else 1
        for x in k:
            load_change[x] += sign * c
    mdeg = Counter(x for k in matching for x in k)
    for x, delta in load_change.items():
        if delta > 0:
            bounds.append(Fraction(graph.capacity[x] - mdeg[x], delta))
    eps = max(Fraction(0), min(bounds))
    x = dict(base)
    if eps > 0:
        for k, c in kappa.items():
            x[k] = (1 - c * eps) if k in matching else c * eps
    return eps, {k: v for k, v in x.items() if v != 0}


def is_feasible(graph, matching, walk: Walk) -> bool:
    return epsilon_augmentation(graph, matching, walk)[0] > 0


def is_proper_trail(graph: CapacitatedGraph, matching, walk: Walk) -> bool:
    """Edges do not repeat and both endpoints respect capacity in ``W xor M``."""
    es = check_walk(graph, walk)
    if len(set(es)) != len(es):
        return False
    sym = set(matching) ^ set(es)
    for v in {walk.start, walk.end}:
        if sum(1 for k in sym if v in k) > graph.capacity[v]:
            return False
    return True


# -- walk search ----------------------------------------------------------

def _mates(graph: CapacitatedGraph, matching) -> dict:
    mate = {}
    for k in matching:
        u, v = tuple(k)
        if u in mate or v in mate:
            raise WalkError("walk search needs a unit-capacity matching")
        mate[u] = v
        mate[v] = u
    return mate


def _int_weights(graph: CapacitatedGraph) -> dict:
    den = 1
    for _, _, w in graph.edges:
        den = math.lcm(den, w.denominator)
    return {edge_key(u, v): int(w * den) for u, v, w in graph.edges}


def find_feasible_augmenting_walk(graph: CapacitatedGraph, matching, start, max_len: int | None = None) -> Walk | None:
    """Shortest feasible augmenting walk from the exposed vertex ``start``.

    Layered dynamic program over (vertex, type of last edge, length) keeping
    the best gain per state.  Walks are not required to be simple, so the
    layers contain exactly the alternating walks and the search is complete
    up to ``max_len`` (default ``3 |V|``).  Among positive accepting states
    of the first productive layer the largest gain wins, then vertex order.
    """
    if any(c > 1 for c in graph.capacity.values()):
        raise WalkError("walk search needs a unit-capacity graph")
    if not graph.has_vertex(start):
        raise KeyError(f"unknown vertex {start!r}")
    mate = _mates(graph, matching)
    if start in mate:
        raise WalkError(f"start vertex {start!r} is not exposed")
    if max_len is None:
        max_len = 3 * graph.n
    wi = _int_weights(graph)

    # parity 0: last edge matched (or nothing yet), next edge unmatched
    # parity 1: last edge unmatched, next edge must be the matched one
    layer = {(start, 0): 0}
    history = []
    for _length in range(1, max_len + 1):
        nxt: dict = {}
        back: dict = {}
        for (x, p), g in layer.items():
            if p == 0:
                moves = [(y, k, 1) for y, k in graph.neighbors(x) if k not in matching]
            elif x in mate:
                y = mate[x]
                moves = [(y, edge_key(x, y), 0)]
            else:
                moves = []
            for y, k, q in moves:
                cand = g + wi[k] if q == 1 else g - wi[k]
                state = (y, q)
                idx = graph.edge_index(k)
                cur = nxt.get(state)
                if cur is None or cand > cur or (cand == cur and idx < back[state][1]):
                    nxt[state] = cand
                    back[state] = ((x, p), idx)
        history.append(back)
        best = None
        for (y, q), g in nxt.items():
            if g <= 0:
                continue
            if q == 1 and y in mate:
                continue
            rank = (-g, graph.vertex_index(y), q)
            if best is None or rank < best[0]:
                best = (rank, (y, q))
        if best is not None:
            return _unwind(history, best[1])
        if not nxt:
            return None
        layer = nxt
    return None


def _unwind(history, state) -> Walk:
    nodes = [state[0]]
    for back in reversed(history):
        state = back[state][0]
        nodes.append(state[0])
    return Walk(tuple(reversed(nodes)))


# -- basic structures -----------------------------------------------------

PATH = "proper-path"
CYCLE = "cycle"
FLOWER = "flower"
BICYCLE = "bi-cycle"


@dataclass(frozen=True)
class BasicStructure:
    """One of the four basic augmenting shapes.

    ``path`` is the augmenting path, the cycle, the flower stem (root to
    base) or the bi-cycle's connecting path (base of the first blossom to
    base of the second).  ``blossoms`` holds the odd cycles, each written
    as a closed walk starting at its base.
    """

    kind: str
    path: Walk
    blossoms: tuple = ()

    @property
    def root(self):
        return self.path.start if self.kind == FLOWER else None

    def as_walk(self) -> Walk:
        if self.kind in (PATH, CYCLE):
            return self.path
        if self.kind == FLOWER:
            return self.path.then(self.blossoms[0]).then(self.path.reversed())
        c, d = self.blossoms
        return self.path.then(d).then(self.path.reversed()).then(c)

    def edge_multiset(self) -> Counter:
        c = Counter(self.path.edges)
        for b in self.blossoms:
            c.update(b.edges)
        return c

    def to_json(self) -> dict:
        return {"kind": self.kind, "path": self.path.to_json(),
                "blossoms": [b.to_json() for b in self.blossoms]}


class Classification(NamedTuple):
    kind: str
    augmenting: bool
    lhs: Fraction
    rhs: Fraction


def _split(graph, matching, walk: Walk) -> tuple[Fraction, Fraction]:
    out = sum((graph.w(k) for k in walk.edges if k not in matching), Fraction(0))
    inn = sum((graph.w(k) for k in walk.edges if k in matching), Fraction(0))
    return out, inn


def _check_blossom(graph, matching, b: Walk) -> None:
    if not b.is_cycle() or len(b) % 2 == 0:
        raise MalformedStructure("blossom is not an odd cycle")
    if not is_alternating(graph, matching, b):
        raise MalformedStructure("blossom is not alternating")
    es = b.edges
    if (es[0] in matching) != (es[-1] in matching):
        raise MalformedStructure("blossom end edges differ in membership")


def classify_and_check(graph: CapacitatedGraph, matching, s: BasicStructure) -> Classification:
    """Validate the shape of ``s`` and evaluate its augmenting inequality."""
    if s.kind == PATH:
        p = s.path
        if len(p) == 0 or not p.is_path():
            raise MalformedStructure("proper path repeats a vertex")
        if not is_alternating(graph, matching, p):
            raise MalformedStructure("path is not alternating")
        if not is_proper_trail(graph, matching, p):
            raise MalformedStructure("path is not proper")
        out, inn = _split(graph, matching, p)
        return Classification(PATH, out > inn, out, inn)
    if s.kind == CYCLE:
        c = s.path
        if not c.is_cycle() or len(c) % 2:
            raise MalformedStructure("cycle is not an even simple cycle")
        if not is_alternating(graph, matching, Walk(c.nodes + c.nodes[1:2])):
            raise MalformedStructure("cycle does not alternate all the way round")
        out, inn = _split(graph, matching, c)
        return Classification(CYCLE, out > inn, out, inn)
    if s.kind == FLOWER:
        if len(s.blossoms) != 1:
            raise MalformedStructure("flower needs exactly one blossom")
        stem, bl = s.path, s.blossoms[0]
        _check_blossom(graph, matching, bl)
        if not stem.is_path():
            raise MalformedStructure("flower stem is not a path")
        if bl.start != stem.end:
            raise MalformedStructure("blossom base is not the stem's end")
        whole = s.as_walk()
        if not is_alternating(graph, matching, whole):
            raise MalformedStructure("(P, C, P^-1) is not alternating")
        if not is_feasible(graph, matching, whole):
            raise MalformedStructure("(P, C, P^-1) is not feasible")
        co, ci = _split(graph, matching, bl)
        po, pi = _split(graph, matching, stem)
        return Classification(FLOWER, co + 2 * po > ci + 2 * pi, co + 2 * po, ci + 2 * pi)
    if s.kind == BICYCLE:
        if len(s.blossoms) != 2:
            raise MalformedStructure("bi-cycle needs two blossoms")
        c, d = s.blossoms
        p = s.path
        _check_blossom(graph, matching, c)
        _check_blossom(graph, matching, d)
        if not p.is_path():
            raise MalformedStructure("bi-cycle connector is not a path")
        if c.start != p.start or d.start != p.end:
            raise MalformedStructure("blossom bases do not match the connector")
        if not is_alternating(graph, matching, s.as_walk()):
            raise MalformedStructure("(P, D, P^-1, C) is not alternating")
        co, ci = _split(graph, matching, c)
        do, di = _split(graph, matching, d)
        po, pi = _split(graph, matching, p)
        lhs, rhs = co + 2 * po + do, ci + 2 * pi + di
        return Classification(BICYCLE, lhs > rhs, lhs, rhs)
    raise MalformedStructure(f"unknown kind {s.kind!r}")


def _min_repeat(nodes) -> tuple[int, int] | None:
    """Indices ``i < j`` with ``nodes[i] == nodes[j]`` and ``j - i`` minimal."""
    last: dict = {}
    best = None
    for j, x in enumerate(nodes):
        i = last.get(x)
        if i is not None and (best is None or j - i < best[1] - best[0]):
            best = (i, j)
        last[x] = j
    return best


def decompose_to_basic_structure(graph: CapacitatedGraph, matching, walk: Walk) -> BasicStructure:
    """Extract a basic augmenting structure from a feasible augmenting walk.

    Shortest closed sub-walks are peeled off one at a time.  An even one is
    returned if it gains, otherwise spliced out (the rest gains at least as
    much).  An odd one is a blossom hanging off a matched edge; the walk's
    value then splits exactly into two flower/bi-cycle values with shorter
    stems, and the positive one is reduced further.
    """
    _mates(graph, matching)
    if not is_alternating(graph, matching, walk):
        raise WalkError("walk is not alternating")
    if gain(graph, matching, walk) <= 0:
        raise WalkError("walk is not augmenting")
    if not is_feasible(graph, matching, walk):
        raise WalkError("walk is not feasible")

    def g(nodes) -> Fraction:
        return gain(graph, matching, Walk(nodes))

    nodes = list(walk.nodes)
    while True:
        rep = _min_repeat(nodes)
        if rep is None:
            result = BasicStructure(PATH, Walk(nodes))
            break
        i, j = rep
        sub = nodes[i:j + 1]
        if (i, j) == (0, len(nodes) - 1):
            # the whole walk is a simple closed walk
            if len(sub) % 2 == 1:
                result = BasicStructure(CYCLE, Walk(sub))
            else:
                result = BasicStructure(FLOWER, Walk(sub[:1]), (Walk(sub),))
            break
        if (j - i) % 2 == 0:
            if g(sub) > 0:
                result = BasicStructure(CYCLE, Walk(sub))
                break
            nodes = nodes[:i] + nodes[j:]
            continue
        blossom = sub
        stem_u = nodes[:i + 1]
        stem_v = nodes[j:][::-1]
        if 2 * g(stem_u) + g(blossom) > 0:
            result = _reduce_flower(stem_u, blossom, g)
        else:
            result = _reduce_flower(stem_v, blossom, g)
        break

    verdict = classify_and_check(graph, matching, result)
    if not verdict.augmenting:
        raise AssertionError(f"decomposition produced a non-augmenting {verdict.kind}")
    return result


def _reduce_flower(stem: list, blossom: list, g) -> BasicStructure:
    while True:
        rep = _min_repeat(stem)
        if rep is None:
            return BasicStructure(FLOWER, Walk(stem), (Walk(blossom),))
        i, j = rep
        sub = stem[i:j + 1]
        if (j - i) % 2 == 0:
            if g(sub) > 0:
                return BasicStructure(CYCLE, Walk(sub))
            stem = stem[:i] + stem[j:]
            continue
        head, tail = stem[:i + 1], stem[j:]
        if 2 * g(head) + g(sub) > 0:
            stem, blossom = head, sub
        else:
            return _reduce_bicycle(sub, tail, blossom, g)


def _reduce_bicycle(first: list, link: list, second: list, g) -> BasicStructure:
    while True:
        rep = _min_repeat(link)
        if rep is None:
            return BasicStructure(BICYCLE, Walk(link), (Walk(first), Walk(second)))
        i, j = rep
        sub = link[i:j + 1]
        if (j - i) % 2 == 0:
            if g(sub) > 0:
                return BasicStructure(CYCLE, Walk(sub))
            link = link[:i] + link[j:]
            continue
        head, tail = link[:i + 1], link[j:]
        if g(first) + 2 * g(head) + g(sub) > 0:
            link, second = head, sub
        else:
            first, link = sub, tail


# -- exhaustive search (desk-scale oracles) ----------------------------------

def _alternating_trails(graph: CapacitatedGraph, matching, vertex_simple: bool):
    """Every alternating trail with at least one edge, from every start.

    With ``vertex_simple`` only paths are produced, plus cycles that close
    on the start vertex.
    """
    for start in graph.vertices:
        nodes = [start]
        used: set = set()

        def rec(last_matched):
            x = nodes[-1]
            for y, k in graph.neighbors(x):
                if k in used:
                    continue
                m = k in matching
                if last_matched is not None and m == last_matched:
                    continue
                closes = y == start
                if vertex_simple and y in nodes and not closes:
                    continue
                nodes.append(y)
                used.add(k)
                yield Walk(tuple(nodes))
                if not (vertex_simple and closes):
                    yield from rec(m)
                nodes.pop()
                used.discard(k)

        yield from rec(None)


def find_proper_augmenting_trail(graph: CapacitatedGraph, matching) -> Walk | None:
    """First proper augmenting trail found by exhaustive search, or None."""
    for trail in _alternating_trails(graph, matching, vertex_simple=False):
        if gain(graph, matching, trail) > 0 and is_proper_trail(graph, matching, trail):
            return trail
    return None


def iter_proper_augmenting_paths(graph: CapacitatedGraph, matching):
    """Proper augmenting paths and augmenting even alternating cycles.

    Each is reported once per start vertex and direction.
    """
    for p in _alternating_trails(graph, matching, vertex_simple=True):
        if p.closed:
            if len(p) % 2 == 0 and gain(graph, matching, p) > 0 and \
                    is_alternating(graph, matching, Walk(p.nodes + p.nodes[1:2])):
                yield p
        elif gain(graph, matching, p) > 0 and is_proper_trail(graph, matching, p):
            yield p

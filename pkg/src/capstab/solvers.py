"""Exact integral and fractional c-matching optimization with LP certificates.

The fractional optimum comes from the bipartite double cover: every vertex
``v`` is split into ``v+`` and ``v-`` (capacity ``c_v`` each) and every edge
``uv`` into the two arcs ``u+ v-`` and ``v+ u-``.  A maximum-weight
integral b-matching there is found with successive shortest paths on
integer-scaled weights; averaging the two copies of each edge gives a
half-integral optimum of the fractional problem, and the final potentials
give an optimal fractional vertex cover.

The integral optimum is found by branch-and-bound using the fractional
value of the residual instance as the bound.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import CapacitatedGraph, edge_key, is_c_matching, is_fractional_c_matching, weight

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FractionalVertexCover:
    """Dual solution: ``y`` per vertex, ``z`` per edge (missing entries are 0)."""

    y: Mapping
    z: Mapping

    def value(self, graph: CapacitatedGraph) -> Fraction:
        total = Fraction(0)
        for v, val in self.y.items():
            total += graph.capacity[v] * val
        for val in self.z.values():
            total += val
        return total


@dataclass(frozen=True)
class StabilityCertificate:
    nu_c: Fraction
    nu_fc: Fraction
    matching: frozenset
    fractional: dict
    cover: FractionalVertexCover = field(repr=False)

    @property
    def stable(self) -> bool:
        return self.nu_c == self.nu_fc


# -- integer kernel ---------------------------------------------------------

def _scale(graph: CapacitatedGraph) -> tuple[int, list]:
    """Common denominator and the edges as ``(i, j, int weight)``."""
    den = 1
    for _, _, w in graph.edges:
        den = math.lcm(den, w.denominator)
    idx = {v: i for i, v in enumerate(graph.vertices)}
    return den, [(idx[u], idx[v], int(w * den)) for u, v, w in graph.edges]


def _double_cover(n: int, caps: list, edges: list, want_dual: bool = False):
    """Max-weight b-matching on the double cover.

    Returns ``(doubled, total, dual)`` where ``doubled[k]`` in {0,1,2} is the
    number of copies of edge ``k`` used, ``total`` the integer weight of the
    double-cover matching (twice the fractional optimum) and ``dual`` the
    pair ``(ry, rz)`` of doubled cover values or ``None``.
    """
    s, t = 2 * n, 2 * n + 1
    head: list = []
    cap: list = []
    cost: list = []
    adj: list = [[] for _ in range(2 * n + 2)]

    def arc(a, b, c, w):
        adj[a].append(len(head))
        head.append(b)
        cap.append(c)
        cost.append(w)
        adj[b].append(len(head))
        head.append(a)
        cap.append(0)
        cost.append(-w)

    for v in range(n):
        arc(s, v, caps[v], 0)
    for v in range(n):
        arc(n + v, t, caps[v], 0)
    first_edge_arc = len(head)
    for i, j, w in edges:
        arc(i, n + j, 1, -w)
        arc(j, n + i, 1, -w)

    total = 0
    flow_value = 0
    nodes = 2 * n + 2
    while True:
        dist = [None] * nodes
        pred = [-1] * nodes
        inq = [False] * nodes
        dist[s] = 0
        queue = deque([s])
        while queue:
            a = queue.popleft()
            inq[a] = False
            da = dist[a]
            for e in adj[a]:
                if cap[e] > 0:
                    b = head[e]
                    nd = da + cost[e]
                    if dist[b] is None or nd < dist[b]:
                        dist[b] = nd
                        pred[b] = e
                        if not inq[b]:
                            inq[b] = True
                            queue.append(b)
        if dist[t] is None or dist[t] >= 0:
            break
        push = None
        b = t
        while b != s:
            e = pred[b]
            push = cap[e] if push is None else min(push, cap[e])
            b = head[e ^ 1]
        b = t
        while b != s:
            e = pred[b]
            cap[e] -= push
            cap[e ^ 1] += push
            b = head[e ^ 1]
        total -= dist[t] * push
        flow_value += push

    doubled = []
    for k in range(len(edges)):
        a1 = first_edge_arc + 4 * k
        doubled.append(cap[a1 + 1] + cap[a1 + 3])
    if not want_dual:
        return doubled, total, None

    # potentials: shortest distances from a virtual source over the final
    # residual graph, with the return arc t->s (and s->t when flow moved)
    res = [(head[e ^ 1], head[e], cost[e]) for e in range(len(head)) if cap[e] > 0]
    res.append((t, s, 0))
    if flow_value > 0:
        res.append((s, t, 0))
    pot = [0] * nodes
    for _ in range(nodes):
        changed = False
        for a, b, c in res:
            if pot[a] + c < pot[b]:
                pot[b] = pot[a] + c
                changed = True
        if not changed:
            break
    else:
        raise AssertionError("negative cycle in an optimal residual graph")

    def excess(e):
        a, b = head[e ^ 1], head[e]
        return max(0, pot[b] - pot[a] - cost[e])

    ry = [excess(2 * v) + excess(2 * (n + v)) for v in range(n)]
    rz = [excess(first_edge_arc + 4 * k) + excess(first_edge_arc + 4 * k + 2) for k in range(len(edges))]
    return doubled, total, (ry, rz)


# -- fractional --------------------------------------------------------------

def fractional_c_matching_with_cover(graph: CapacitatedGraph) -> tuple[dict, Fraction, FractionalVertexCover]:
    """Half-integral optimum ``x``, its value, and an optimal cover."""
    den, edges = _scale(graph)
    caps = [graph.capacity[v] for v in graph.vertices]
    doubled, total, (ry, rz) = _double_cover(graph.n, caps, edges, want_dual=True)
    keys = graph.edge_keys()
    x = {keys[k]: Fraction(d, 2) for k, d in enumerate(doubled) if d}
    value = Fraction(total, 2 * den)
    cover = FractionalVertexCover(
        {v: Fraction(r, 2 * den) for v, r in zip(graph.vertices, ry) if r},
        {keys[k]: Fraction(r, 2 * den) for k, r in enumerate(rz) if r},
    )
    if weight(graph, x) != value:
        raise AssertionError("fractional witness does not achieve its value")
    feasible, dual_value = verify_fractional_vertex_cover(graph, cover)
    if not feasible or dual_value != value:
        raise AssertionError("dual certificate does not close the gap")
    return x, value, cover


def fractional_c_matching(graph: CapacitatedGraph) -> tuple[dict, Fraction]:
    x, value, _ = fractional_c_matching_with_cover(graph)
    return x, value


def fractional_value(graph: CapacitatedGraph) -> Fraction:
    den, edges = _scale(graph)
    caps = [graph.capacity[v] for v in graph.vertices]
    _, total, _ = _double_cover(graph.n, caps, edges)
    return Fraction(total, 2 * den)


def fractional_oracle(graph: CapacitatedGraph, limit: int = 20) -> Fraction:
    """Best value over all vectors in ``{0, 1/2, 1}^E`` by enumeration.

    Raises ValueError for graphs with more than ``limit`` edges.
    """
    if graph.m > limit:
        raise ValueError(f"enumeration oracle is limited to {limit} edges")
    den, edges = _scale(graph)
    room = [2 * graph.capacity[v] for v in graph.vertices]
    m = len(edges)
    suffix = [0] * (m + 1)
    for k in range(m - 1, -1, -1):
        suffix[k] = suffix[k + 1] + 2 * edges[k][2]
    best = 0

    def rec(k, acc):
        nonlocal best
        if acc > best:
            best = acc
        if k == m or acc + suffix[k] <= best:
            return
        i, j, w = edges[k]
        for amount in (2, 1):
            if room[i] >= amount and room[j] >= amount:
                room[i] -= amount
                room[j] -= amount
                rec(k + 1, acc + amount * w)
                room[i] += amount
                room[j] += amount
        rec(k + 1, acc)

    rec(0, 0)
    return Fraction(best, 2 * den)


# -- integral ----------------------------------------------------------------

def max_weight_c_matching(graph: CapacitatedGraph) -> tuple[frozenset, Fraction]:
    """Maximum-weight c-matching by branch-and-bound.

    Branches on the first half-valued edge of the fractional optimum
    (include before exclude); the bound at every node is the fixed weight
    plus the fractional optimum of the residual instance.
    """
    den, edges = _scale(graph)
    n = graph.n
    caps = [graph.capacity[v] for v in graph.vertices]

    # greedy start, heaviest first, canonical order on ties
    room = list(caps)
    greedy = []
    for k in sorted(range(len(edges)), key=lambda k: -edges[k][2]):
        i, j, w = edges[k]
        if w > 0 and room[i] and room[j]:
            room[i] -= 1
            room[j] -= 1
            greedy.append(k)
    best_val = sum(edges[k][2] for k in greedy)
    best_set = sorted(greedy)

    def rec(fixed: list, fixed_val: int, room: list, free: list):
        nonlocal best_val, best_set
        sub = [edges[k] for k in free]
        doubled, total, _ = _double_cover(n, room, sub)
        # total is twice the residual fractional optimum
        if 2 * fixed_val + total <= 2 * best_val:
            return
        halves = [free[p] for p, d in enumerate(doubled) if d == 1]
        ones = [free[p] for p, d in enumerate(doubled) if d == 2]
        if not halves:
            best_val = fixed_val + total // 2
            best_set = sorted(fixed + ones)
            return
        # rounding heuristic: keep the full edges, add halves while they fit
        r = list(room)
        for k in ones:
            i, j, _ = edges[k]
            r[i] -= 1
            r[j] -= 1
        picked = list(ones)
        for k in halves:
            i, j, _ = edges[k]
            if r[i] and r[j]:
                r[i] -= 1
                r[j] -= 1
                picked.append(k)
        val = fixed_val + sum(edges[k][2] for k in picked)
        if val > best_val:
            best_val = val
            best_set = sorted(fixed + picked)
        k = halves[0]
        i, j, w = edges[k]
        rest = [q for q in free if q != k]
        if room[i] and room[j]:
            r2 = list(room)
            r2[i] -= 1
            r2[j] -= 1
            rec(fixed + [k], fixed_val + w, r2, rest)
        rec(fixed, fixed_val, room, rest)

    rec([], 0, caps, list(range(len(edges))))
    keys = graph.edge_keys()
    matching = frozenset(keys[k] for k in best_set)
    value = Fraction(best_val, den)
    if not is_c_matching(graph, matching) or weight(graph, matching) != value:
        raise AssertionError("branch-and-bound witness is inconsistent")
    return matching, value


def max_weight_c_matching_bruteforce(graph: CapacitatedGraph, limit: int = 24) -> Fraction:
    """Exhaustive enumeration of c-matchings (oracle for small graphs).

    Raises ValueError for graphs with more than ``limit`` edges.
    """
    if graph.m > limit:
        raise ValueError(f"enumeration oracle is limited to {limit} edges")
    den, edges = _scale(graph)
    room = [graph.capacity[v] for v in graph.vertices]
    best = 0

    def rec(k, acc):
        nonlocal best
        if k == len(edges):
            best = max(best, acc)
            return
        i, j, w = edges[k]
        if room[i] and room[j]:
            room[i] -= 1
            room[j] -= 1
            rec(k + 1, acc + w)
            room[i] += 1
            room[j] += 1
        rec(k + 1, acc)

    rec(0, 0)
    return Fraction(best, den)


def is_maximum_c_matching(graph: CapacitatedGraph, matching) -> bool:
    matching = list(matching)
    if not is_c_matching(graph, matching):
        raise ValueError("not a c-matching")
    return weight(graph, matching) == max_weight_c_matching(graph)[1]


def is_stable_graph(graph: CapacitatedGraph) -> StabilityCertificate:
    matching, nu_c = max_weight_c_matching(graph)
    x, nu_fc, cover = fractional_c_matching_with_cover(graph)
    if nu_c > nu_fc:
        raise AssertionError("integral optimum exceeds the fractional optimum")
    return StabilityCertificate(nu_c, nu_fc, matching, x, cover)


# -- certificates -------------------------------------------------------------

def verify_fractional_vertex_cover(graph: CapacitatedGraph, cover: FractionalVertexCover) -> tuple[bool, Fraction]:
    """Feasibility for the dual constraints and the value ``c.y + 1.z``."""
    for v in cover.y:
        if not graph.has_vertex(v):
            raise KeyError(f"unknown vertex {v!r}")
    for k in cover.z:
        if not graph.has_edge(k):
            raise KeyError(f"unknown edge {sorted(map(str, k))}")
    feasible = all(val >= 0 for val in itertools.chain(cover.y.values(), cover.z.values()))
    for u, v, w in graph.edges:
        lhs = cover.y.get(u, 0) + cover.y.get(v, 0) + cover.z.get(edge_key(u, v), 0)
        if lhs < w:
            feasible = False
    return feasible, cover.value(graph)


def check_complementary_slackness(graph: CapacitatedGraph, x: Mapping, cover: FractionalVertexCover) -> bool:
    """True when ``x`` and the cover are feasible and jointly optimal."""
    if not is_fractional_c_matching(graph, x):
        return False
    feasible, _ = verify_fractional_vertex_cover(graph, cover)
    if not feasible:
        return False
    load: dict = {}
    for k, val in x.items():
        for v in k:
            load[v] = load.get(v, 0) + val
    for u, v, w in graph.edges:
        k = edge_key(u, v)
        xe = x.get(k, 0)
        if xe > 0 and cover.y.get(u, 0) + cover.y.get(v, 0) + cover.z.get(k, 0) != w:
            return False
        if cover.z.get(k, 0) > 0 and xe != 1:
            return False
    for v, yv in cover.y.items():
        if yv > 0 and load.get(v, 0) != graph.capacity[v]:
            return False
    return True

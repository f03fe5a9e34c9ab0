"""Cooperative matching games and network bargaining outcomes.

Core membership is checked by enumerating coalitions; the existence of a
stable bargaining outcome reduces to stability of the graph.  The outside
option of a capacitated player is a documented choice (see
:func:`verify_outcome`).
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import CapacitatedGraph, edge_key, induced_subgraph, is_c_matching, weight
from .instances import fixtures
from .solvers import FractionalVertexCover, is_stable_graph, max_weight_c_matching


def check_core_allocation(graph: CapacitatedGraph, allocation: Mapping, limit: int = 20) -> tuple[bool, dict | None]:
    """Is ``allocation`` in the core?  Returns the first violation found.

    Violations are reported as dicts with a ``kind`` of ``"total"``
    (allocation does not distribute exactly ``nu^c``) or ``"coalition"``
    (smallest, then first in vertex order, coalition ``S`` with
    ``y(S) < nu^c(G[S])``).  Negative entries raise ValueError.
    """
    if graph.n > limit:
        raise ValueError(f"coalition enumeration is limited to {limit} vertices")
    for v in allocation:
        if not graph.has_vertex(v):
            raise KeyError(f"unknown vertex {v!r}")
    y = {v: Fraction(allocation.get(v, 0)) for v in graph.vertices}
    for v in graph.vertices:
        if y[v] < 0:
            raise ValueError(f"negative allocation {y[v]} for vertex {v!r}")
    _, nu = max_weight_c_matching(graph)
    total = sum(y.values(), Fraction(0))
    if total != nu:
        return False, {"kind": "total", "total": total, "nu": nu}
    for size in range(2, graph.n + 1):
        for coalition in itertools.combinations(graph.vertices, size):
            share = sum((y[v] for v in coalition), Fraction(0))
            sub = induced_subgraph(graph, coalition)
            if sub.m == 0:
                continue
            value = max_weight_c_matching(sub)[1]
            if share < value:
                return False, {"kind": "coalition", "coalition": list(coalition), "share": share, "nu": value}
    return True, None


def core_allocation_from_cover(graph: CapacitatedGraph, cover: FractionalVertexCover) -> dict:
    """Allocation ``c_v y_v + (1/2) sum of z_e over edges at v``.

    Its total is the cover value; for a stable graph with an optimal cover
    this is ``nu^c`` and every coalition receives at least its own value.
    """
    y = {v: graph.capacity[v] * cover.y.get(v, Fraction(0)) for v in graph.vertices}
    for k, val in cover.z.items():
        for v in k:
            y[v] += val / 2
    return y


def nbg_has_stable_outcome(graph: CapacitatedGraph) -> bool:
    return is_stable_graph(graph).stable


@dataclass(frozen=True)
class Outcome:
    """A c-matching and the split of each deal: ``split[(u, v)]`` is what
    ``u`` earns from the deal ``uv``."""

    matching: frozenset
    split: Mapping


@dataclass
class OutcomeReport:
    consistent: bool
    stable: bool
    options: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)


def verify_outcome(graph: CapacitatedGraph, outcome: Outcome) -> OutcomeReport:
    """Consistency of the splits and stability against outside options.

    For a non-deal edge ``uv`` the option of ``u`` is ``w_uv - theta_v``,
    where ``theta_v`` is 0 when ``v`` has spare capacity and otherwise the
    least amount ``v`` earns from one of its deals.  A saturated player is
    stable if its weakest deal earns at least its best option; a player
    with spare capacity needs a best option of at most 0.
    """
    problems = []
    matching = frozenset(outcome.matching)
    if not is_c_matching(graph, matching):
        problems.append("matching violates a capacity")
    earn: dict = {v: [] for v in graph.vertices}
    for (u, v), a in outcome.split.items():
        k = edge_key(u, v)
        if not graph.has_edge(k):
            problems.append(f"split on non-edge {u}-{v}")
        elif k not in matching and a != 0:
            problems.append(f"non-deal edge {u}-{v} carries a nonzero split")
        if a < 0:
            problems.append(f"negative split on {u}-{v}")
    for k in graph.sorted_edges(matching):
        u, v = graph.endpoints(k)
        a_uv = Fraction(outcome.split.get((u, v), 0))
        a_vu = Fraction(outcome.split.get((v, u), 0))
        if a_uv + a_vu != graph.w(k):
            problems.append(f"deal {u}-{v} splits {a_uv + a_vu}, weight is {graph.w(k)}")
        earn[u].append(a_uv)
        earn[v].append(a_vu)
    consistent = not problems

    deg = {v: len(earn[v]) for v in graph.vertices}

    def theta(v):
        if graph.capacity[v] == 0:
            return None
        return Fraction(0) if deg[v] < graph.capacity[v] else min(earn[v])

    options = {}
    stable = True
    for u in graph.vertices:
        best = Fraction(0)
        for v, k in graph.neighbors(u):
            if k in matching:
                continue
            t = theta(v)
            if t is not None:
                best = max(best, graph.w(k) - t)
        options[u] = best
        if graph.capacity[u] == 0:
            continue
        threshold = min(earn[u]) if deg[u] >= graph.capacity[u] else Fraction(0)
        if best > threshold:
            stable = False
    return OutcomeReport(consistent, consistent and stable, options, problems)


def divergence_demo() -> dict:
    """The four-vertex example where the core is nonempty but no stable
    bargaining outcome exists.  All facts are recomputed and asserted."""
    inst = fixtures("fig5")
    g = inst.graph
    cert = is_stable_graph(g)
    y = {"1": Fraction(1), "2": Fraction(1), "3": Fraction(1), "4": Fraction(0)}
    in_core, violation = check_core_allocation(g, y)
    nbg = nbg_has_stable_outcome(g)
    pattern = {edge_key("1", "2"): Fraction(1), edge_key("1", "3"): Fraction(1),
               edge_key("2", "3"): Fraction(1, 2), edge_key("2", "4"): Fraction(1, 2),
               edge_key("3", "4"): Fraction(1, 2)}
    pattern_value = weight(g, pattern)
    facts = {
        "nu_c": cert.nu_c,
        "nu_fc": cert.nu_fc,
        "graph_stable": cert.stable,
        "allocation_in_core": in_core,
        "nbg_stable_outcome": nbg,
    }
    expected = {"nu_c": 3, "nu_fc": Fraction(7, 2), "graph_stable": False,
                "allocation_in_core": True, "nbg_stable_outcome": False}
    if facts != expected or violation is not None or pattern_value != cert.nu_fc:
        raise AssertionError(f"divergence example did not reproduce: {facts}")
    return {
        "facts": facts,
        "allocation": y,
        "integral_witness": sorted(sorted(k) for k in cert.matching),
        "fractional_witness": {"-".join(sorted(k)): v for k, v in sorted(cert.fractional.items(), key=lambda kv: sorted(kv[0]))},
        "reference_fractional": {"-".join(sorted(k)): v for k, v in sorted(pattern.items(), key=lambda kv: sorted(kv[0]))},
    }

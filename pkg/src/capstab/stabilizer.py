"""Vertex stabilizers that keep a given c-matching.

:func:`m_vertex_stabilizer` finds a minimum set of matching-exposed
vertices whose removal makes ``w(M)`` equal to the fractional optimum,
working on the unit-capacity copy graph one exposed copy at a time.
:func:`m_vertex_stabilizer_relaxed` accepts any c-matching and returns a
set at most twice the optimum.  Both have brute-force counterparts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .auxiliary import PreconditionError, both_tracebacks, build_auxiliary, remove_original_vertex
from .graph import CapacitatedGraph, Instance, remove_vertices, weight
from .solvers import fractional_value, is_maximum_c_matching, max_weight_c_matching
from .walks import BICYCLE, CYCLE, FLOWER, decompose_to_basic_structure, find_feasible_augmenting_walk, gain

STABILIZED = "stabilized"
INFEASIBLE = "infeasible"


class NotMaximumError(ValueError):
    pass


@dataclass
class StabilizerResult:
    outcome: str
    removed: tuple = ()
    reason: str | None = None
    witness: dict | None = None
    trace: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)

    @property
    def stabilized(self) -> bool:
        return self.outcome == STABILIZED

    @property
    def size(self) -> int:
        return len(self.removed)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "removed": [str(v) for v in self.removed],
            "reason": self.reason,
            "witness": self.witness,
            "trace": self.trace,
            "certificate": self.certificate,
        }


def _copy_name(c) -> str:
    return f"{c[0]}_{c[1]}"


def _walk_json(walk) -> dict:
    return {"start": _copy_name(walk.start), "steps": [[_copy_name(a), _copy_name(b)] for a, b in walk.steps]}


def _stability_certificate(instance: Instance) -> dict:
    w_m = weight(instance.graph, instance.matching)
    nu_f = fractional_value(instance.graph)
    return {"w_M": str(w_m), "nu_f": str(nu_f), "stable": w_m == nu_f}


def _run(instance: Instance, relaxed: bool, m_max: bool) -> StabilizerResult:
    bundle = build_auxiliary(instance)
    current = instance
    pending = bundle.exposed_copies
    removed: list = []
    trace: list = []

    def drop(v):
        nonlocal bundle, current, pending
        removed.append(v)
        bundle, current = remove_original_vertex(bundle, current, v)
        pending = [c for c in pending if c[0] != v]

    def fail(reason, witness, step):
        step["case"] = reason
        trace.append(step)
        return StabilizerResult(INFEASIBLE, tuple(removed), reason, witness, trace,
                                _stability_certificate(current))

    while pending:
        ui = pending[0]
        walk = find_feasible_augmenting_walk(bundle.g_prime, bundle.m_prime, ui)
        step = {"start": _copy_name(ui), "walk": None, "case": None, "removed": []}
        if walk is None:
            pending.pop(0)
            step["case"] = "no-walk"
            trace.append(step)
            continue
        step["walk"] = _walk_json(walk)
        vj = walk.end
        u, v = ui[0], vj[0]
        cu, cv = current.covered(u), current.covered(v)
        if cu and cv:
            return fail("both-endpoints-covered", {"walk": step["walk"]}, step)
        if cu or cv:
            target = v if cu else u
            step["case"] = "one-endpoint-exposed"
            step["removed"] = [str(target)]
            drop(target)
        elif u == v:
            step["case"] = "same-image"
            step["removed"] = [str(u)]
            drop(u)
        else:
            s = decompose_to_basic_structure(bundle.g_prime, bundle.m_prime, walk)
            structure = {"kind": s.kind, "walk": _walk_json(s.as_walk())}
            step["structure"] = structure
            if s.kind in (CYCLE, BICYCLE):
                return fail(f"augmenting-{s.kind}", structure, step)
            if s.kind == FLOWER:
                root = s.root[0]
                step["case"] = "flower"
                step["removed"] = [str(root)]
                drop(root)
            elif relaxed and not m_max:
                step["case"] = "path-both-endpoints"
                step["removed"] = [str(u), str(v)]
                drop(u)
                drop(v)
            else:
                try:
                    first, last = both_tracebacks(current, bundle, s.path)
                except PreconditionError:
                    raise NotMaximumError("path image repeats no edge; the matching is not maximum") from None
                g_first = gain(current.graph, current.matching, first)
                g_last = gain(current.graph, current.matching, last)
                step["case"] = "path-traceback"
                step["tracebacks"] = {"first_gain": str(g_first), "last_gain": str(g_last)}
                targets = []
                if g_first > 0:
                    targets.append(s.path.start[0])
                if g_last > 0:
                    targets.append(s.path.end[0])
                if not targets:
                    raise NotMaximumError("no traceback is augmenting; the matching is not maximum")
                step["removed"] = [str(t) for t in targets]
                for t in targets:
                    drop(t)
        trace.append(step)

    cert = _stability_certificate(current)
    if not cert["stable"]:
        return StabilizerResult(INFEASIBLE, tuple(removed), "final-check", {"w_M": cert["w_M"], "nu_f": cert["nu_f"]},
                                trace, cert)
    return StabilizerResult(STABILIZED, tuple(removed), None, None, trace, cert)


def _require_matching(instance: Instance) -> Instance:
    if instance.matching is None:
        raise ValueError("instance carries no matching")
    return instance


def m_vertex_stabilizer(instance: Instance, trust_maximal: bool = False) -> StabilizerResult:
    """Minimum matching-preserving vertex stabilizer for a maximum ``M``.

    With ``trust_maximal`` the maximality check of ``M`` is skipped.
    """
    _require_matching(instance)
    if not trust_maximal and not is_maximum_c_matching(instance.graph, instance.matching):
        raise NotMaximumError("the matching is not maximum-weight")
    return _run(instance, relaxed=False, m_max=True)


def m_vertex_stabilizer_relaxed(instance: Instance) -> StabilizerResult:
    """Variant for arbitrary ``M``; removes both path endpoints when ``M`` is
    not maximum, which keeps the output within twice the optimum."""
    _require_matching(instance)
    m_max = is_maximum_c_matching(instance.graph, instance.matching)
    result = _run(instance, relaxed=True, m_max=m_max)
    result.certificate["matching_maximum"] = m_max
    return result


def m_vertex_stabilizer_bruteforce(instance: Instance) -> frozenset | None:
    """Smallest set of exposed vertices making ``[G \\ S, M]`` stable, or None."""
    _require_matching(instance)
    g = instance.graph
    w_m = weight(g, instance.matching)
    exposed = [v for v in g.vertices if not instance.covered(v)]
    for size in range(len(exposed) + 1):
        for combo in itertools.combinations(exposed, size):
            if fractional_value(remove_vertices(g, combo, reclamp=False)) == w_m:
                return frozenset(combo)
    return None


def vertex_stabilizer_bruteforce(graph: CapacitatedGraph) -> frozenset:
    """Smallest vertex set whose removal leaves a stable graph."""
    for size in range(graph.n + 1):
        for combo in itertools.combinations(graph.vertices, size):
            rest = remove_vertices(graph, combo, reclamp=False)
            if max_weight_c_matching(rest)[1] == fractional_value(rest):
                return frozenset(combo)
    raise AssertionError("removing every vertex always stabilizes")


def is_stable_instance(instance: Instance, removed=()) -> bool:
    """``w(M) == nu_f(G \\ removed)`` for the instance's matching."""
    _require_matching(instance)
    rest = remove_vertices(instance.graph, removed, reclamp=False)
    return weight(rest, instance.matching) == fractional_value(rest)

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from capstab.games import (
    Outcome,
    check_core_allocation,
    core_allocation_from_cover,
    divergence_demo,
    nbg_has_stable_outcome,
    verify_outcome,
)
from capstab.graph import edge_key, graph_from_edges
from capstab.instances import fixtures, gen_random
from capstab.io import to_jsonable
from capstab.solvers import fractional_c_matching_with_cover, is_stable_graph

from corpus import WEIGHTS

HALF = Fraction(1, 2)


def K(u, v):
    return edge_key(u, v)


class TestCore:
    def test_fig5_allocation_in_core(self):
        g = fixtures("fig5").graph
        assert check_core_allocation(g, {"1": 1, "2": 1, "3": 1, "4": 0}) == (True, None)

    def test_fig5_total_mismatch(self):
        g = fixtures("fig5").graph
        ok, violation = check_core_allocation(g, {"1": 1, "2": 1, "3": 1, "4": 1})
        assert not ok and violation["kind"] == "total" and violation["total"] == 4

    def test_triangle_coalition(self):
        g = fixtures("triangle").graph
        ok, violation = check_core_allocation(g, {"1": HALF, "2": HALF, "3": 0})
        assert not ok
        assert violation["kind"] == "coalition" and violation["coalition"] == ["1", "3"]
        assert violation["nu"] == 1 and violation["share"] == HALF

    def test_negative_entry(self):
        with pytest.raises(ValueError):
            check_core_allocation(fixtures("edge").graph, {"u": 2, "v": -1})

    def test_unknown_vertex(self):
        with pytest.raises(KeyError):
            check_core_allocation(fixtures("edge").graph, {"q": 1})

    def test_size_guard(self):
        g = gen_random(9, 0.2, (1, 1), (1,), 0)
        with pytest.raises(ValueError):
            check_core_allocation(g, {}, limit=8)

    @pytest.mark.parametrize("seed", range(40))
    def test_stable_graphs_have_core_allocations(self, seed):
        rr = random.Random(seed)
        g = gen_random(rr.randint(2, 7), rr.choice([0.3, 0.5, 0.7]), (1, 3), WEIGHTS, seed)
        if not is_stable_graph(g).stable:
            pytest.skip("unstable graph")
        _, _, cover = fractional_c_matching_with_cover(g)
        y = core_allocation_from_cover(g, cover)
        assert check_core_allocation(g, y) == (True, None)


class TestBargaining:
    def test_existence_matches_stability(self):
        assert nbg_has_stable_outcome(fixtures("fig5").graph) is False
        assert nbg_has_stable_outcome(fixtures("edge").graph) is True
        assert nbg_has_stable_outcome(fixtures("triangle").graph) is False

    @pytest.mark.parametrize("seed", range(30))
    def test_existence_is_the_stability_verdict(self, seed):
        g = gen_random(6, 0.5, (1, 3), WEIGHTS, seed)
        assert nbg_has_stable_outcome(g) == is_stable_graph(g).stable

    def test_single_edge_even_split(self):
        g = graph_from_edges([("u", "v", 3)])
        rep = verify_outcome(g, Outcome(frozenset({K("u", "v")}), {("u", "v"): Fraction(3, 2), ("v", "u"): Fraction(3, 2)}))
        assert rep.consistent and rep.stable and not rep.problems

    def test_path_with_starved_middle_vertex(self):
        g = fixtures("path3").graph
        rep = verify_outcome(g, Outcome(frozenset({K("u", "v")}), {("u", "v"): 1, ("v", "u"): 0}))
        assert rep.consistent and not rep.stable
        assert rep.options["v"] == 1 and rep.options["u"] == 0

    def test_fig5_even_splits(self):
        inst = fixtures("fig5")
        split = {}
        for k in inst.matching:
            a, b = tuple(k)
            split[(a, b)] = split[(b, a)] = HALF
        rep = verify_outcome(inst.graph, Outcome(inst.matching, split))
        assert rep.consistent and not rep.stable
        assert rep.options["2"] == 1 and rep.options["4"] == HALF

    def test_inconsistent_split(self):
        g = fixtures("path3").graph
        rep = verify_outcome(g, Outcome(frozenset({K("u", "v")}), {("u", "v"): 1, ("v", "u"): 1, ("v", "w"): HALF}))
        assert not rep.consistent and not rep.stable
        assert len(rep.problems) == 2


class TestDivergence:
    def test_facts(self):
        report = divergence_demo()
        assert report["facts"] == {"nu_c": 3, "nu_fc": Fraction(7, 2), "graph_stable": False,
                                   "allocation_in_core": True, "nbg_stable_outcome": False}

    def test_fractional_witness_pattern(self):
        report = divergence_demo()
        assert report["fractional_witness"] == report["reference_fractional"]
        assert sorted(v for v in report["fractional_witness"].values()) == [HALF, HALF, HALF, 1, 1]

    def test_json_round_trip(self):
        data = to_jsonable(divergence_demo())
        assert json.loads(json.dumps(data)) == data
        assert data["facts"]["nu_fc"] == "7/2"

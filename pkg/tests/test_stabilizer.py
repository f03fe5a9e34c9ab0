from __future__ import annotations

import random
from fractions import Fraction

import pytest

from capstab.graph import Instance, edge_key, graph_from_edges, remove_vertices, weight
from capstab.instances import fixtures, gen_planted
from capstab.solvers import fractional_value
from capstab.stabilizer import (
    INFEASIBLE,
    STABILIZED,
    NotMaximumError,
    is_stable_instance,
    m_vertex_stabilizer,
    m_vertex_stabilizer_bruteforce,
    m_vertex_stabilizer_relaxed,
    vertex_stabilizer_bruteforce,
)

from corpus import maximum_corpus, nonmaximum_corpus


def K(u, v):
    return edge_key(u, v)


def two_triangles() -> Instance:
    """Every vertex covered, yet the two blossoms beat the matching."""
    g = graph_from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("a", "d", "1/2"),
                          ("d", "e"), ("e", "f"), ("f", "d")])
    return Instance(g, frozenset({K("b", "c"), K("a", "d"), K("e", "f")}))


def planted_variant(seed: int) -> Instance:
    rr = random.Random(seed)
    return gen_planted(seed, rr.choice([(1, 1), (2, 1), (1, 2), (2, 2)]),
                       chord_density=rr.choice([0, 0.05, 0.15]), extra_capacity=rr.choice([0, 0.3]))


def check_result(inst, result):
    if result.stabilized:
        assert not any(inst.covered(v) for v in result.removed)
        rest = remove_vertices(inst.graph, result.removed, reclamp=False)
        assert weight(rest, inst.matching) == fractional_value(rest)
        assert result.certificate["stable"] is True


class TestAlgorithm:
    def test_fig1_removes_t_only(self):
        inst = fixtures("fig1")
        result = m_vertex_stabilizer(inst)
        assert result.outcome == STABILIZED
        assert "b" not in result.removed
        assert result.size == len(m_vertex_stabilizer_bruteforce(inst))
        assert result.removed == ("t",)
        check_result(inst, result)

    def test_stable_instance_needs_nothing(self):
        result = m_vertex_stabilizer(fixtures("edge"))
        assert result.outcome == STABILIZED and result.removed == ()

    def test_triangle_with_one_matched_edge(self):
        g = fixtures("triangle").graph
        inst = Instance(g, frozenset({K("1", "2")}))
        result = m_vertex_stabilizer(inst)
        assert result.outcome == STABILIZED and result.removed == ("3",)
        assert result.trace[0]["case"] == "same-image"

    def test_all_covered_is_infeasible(self):
        inst = two_triangles()
        result = m_vertex_stabilizer(inst)
        assert result.outcome == INFEASIBLE
        assert result.reason == "final-check"
        assert m_vertex_stabilizer_bruteforce(inst) is None

    def test_rejects_non_maximum(self):
        inst = Instance(fixtures("fig5").graph, frozenset({K("1", "2")}))
        with pytest.raises(NotMaximumError):
            m_vertex_stabilizer(inst)

    def test_trust_maximal_skips_check(self):
        inst = fixtures("fig1")
        assert m_vertex_stabilizer(inst, trust_maximal=True).removed == m_vertex_stabilizer(inst).removed

    def test_needs_a_matching(self):
        with pytest.raises(ValueError):
            m_vertex_stabilizer(fixtures("triangle"))

    def test_deterministic_and_bounded(self):
        for _, inst in maximum_corpus(random_count=80, planted_seeds=80):
            first = m_vertex_stabilizer(inst)
            second = m_vertex_stabilizer(inst)
            assert first.to_json() == second.to_json()
            exposed_copies = sum(inst.graph.capacity[v] for v in inst.graph.vertices) - 2 * len(inst.matching)
            assert len(first.trace) <= inst.graph.n + exposed_copies

    def test_optimal_on_a_small_corpus(self):
        for _, inst in maximum_corpus(random_count=120, planted_seeds=120):
            result = m_vertex_stabilizer(inst)
            oracle = m_vertex_stabilizer_bruteforce(inst)
            assert result.stabilized == (oracle is not None)
            if oracle is not None:
                assert result.size == len(oracle)
            check_result(inst, result)


class TestRelaxed:
    def test_same_as_exact_on_maximum_matchings(self):
        for _, inst in maximum_corpus(random_count=60, planted_seeds=60):
            exact = m_vertex_stabilizer(inst)
            relaxed = m_vertex_stabilizer_relaxed(inst)
            assert relaxed.certificate.pop("matching_maximum") is True
            assert exact.to_json() == relaxed.to_json()

    def test_single_edge_without_matching(self):
        inst = Instance(graph_from_edges([("u", "v")]), frozenset())
        result = m_vertex_stabilizer_relaxed(inst)
        assert result.outcome == STABILIZED and set(result.removed) == {"u", "v"}
        assert len(m_vertex_stabilizer_bruteforce(inst)) == 1

    def test_infeasible_instance(self):
        inst = two_triangles()
        assert m_vertex_stabilizer_relaxed(inst).outcome == INFEASIBLE

    def test_within_twice_the_optimum(self):
        count = 0
        for _, inst in nonmaximum_corpus(120):
            count += 1
            result = m_vertex_stabilizer_relaxed(inst)
            oracle = m_vertex_stabilizer_bruteforce(inst)
            assert result.stabilized == (oracle is not None)
            if oracle is not None:
                assert result.size <= 2 * len(oracle)
            check_result(inst, result)
        assert count > 40


class TestOracles:
    def test_stable_gives_empty_set(self):
        assert m_vertex_stabilizer_bruteforce(fixtures("edge")) == frozenset()
        assert vertex_stabilizer_bruteforce(fixtures("k4").graph) == frozenset()

    def test_fig5(self):
        inst = fixtures("fig5")
        assert m_vertex_stabilizer_bruteforce(inst) == frozenset({"4"})
        rest = remove_vertices(inst.graph, ["4"])
        assert fractional_value(rest) == 3
        assert len(vertex_stabilizer_bruteforce(inst.graph)) == 1

    def test_c5(self):
        g = fixtures("c5").graph
        inst = Instance(g, frozenset({K("1", "2"), K("3", "4")}))
        oracle = m_vertex_stabilizer_bruteforce(inst)
        assert oracle == frozenset({"5"})
        assert m_vertex_stabilizer(inst).removed == ("5",)

    def test_triangle(self):
        assert len(vertex_stabilizer_bruteforce(fixtures("triangle").graph)) == 1

    def test_stability_of_instances(self):
        inst = fixtures("fig5")
        assert not is_stable_instance(inst)
        assert is_stable_instance(inst, ["4"])
        assert fractional_value(inst.graph) == Fraction(7, 2)


class TestRareBranches:
    """Seeds of the planted family whose runs reach the flower and the
    traceback branches, checked against the exhaustive oracle."""

    @pytest.mark.parametrize("seed,case", [(s, "flower") for s in (436, 779, 1081, 1468, 1730)]
                             + [(s, "path-traceback") for s in (115, 184, 187, 217, 218, 232, 243, 276)])
    def test_branch_agrees_with_oracle(self, seed, case):
        inst = planted_variant(seed)
        result = m_vertex_stabilizer(inst)
        assert case in {step["case"] for step in result.trace}
        check_result(inst, result)
        oracle = m_vertex_stabilizer_bruteforce(inst)
        assert result.stabilized == (oracle is not None)
        if oracle is not None:
            assert len(result.removed) == len(oracle)

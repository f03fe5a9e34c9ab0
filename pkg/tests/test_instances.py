from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capstab.graph import edge_key, is_c_matching, remove_vertices
from capstab.instances import (
    FIXTURES,
    MidsInstance,
    build_mids_reduction,
    fixtures,
    gen_planted,
    gen_random,
    greedy_ids,
    is_independent_dominating,
    mids_bruteforce,
    random_c_matching,
    random_maximum_c_matching,
)
from capstab.solvers import is_maximum_c_matching, is_stable_graph


def K(u, v):
    return edge_key(u, v)


@st.composite
def sources(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    vs = [str(i) for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return MidsInstance(vs, chosen)


class TestFixtures:
    def test_fig1(self):
        inst = fixtures("fig1")
        g = inst.graph
        assert (g.n, g.m, len(inst.matching)) == (9, 9, 5)
        assert g.w(K("b", "c")) == Fraction(1, 2)
        assert {v for v in g.vertices if g.capacity[v] == 2} == {"v", "x", "b"}

    def test_fig5(self):
        inst = fixtures("fig5")
        assert [inst.graph.capacity[v] for v in inst.graph.vertices] == [2, 2, 2, 1]
        assert inst.graph.m == 5 and all(w == 1 for _, _, w in inst.graph.edges)

    def test_triangle(self):
        g = fixtures("triangle").graph
        assert (g.n, g.m) == (3, 3) and all(g.capacity[v] == 1 for v in g.vertices)

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="fig1"):
            fixtures("fig9")

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_fixture_matchings_are_valid(self, name):
        inst = fixtures(name)
        if inst.matching is not None:
            assert is_c_matching(inst.graph, inst.matching)


class TestRandom:
    def test_seeded_snapshot(self):
        g = gen_random(6, 0.5, (1, 3), [Fraction(1, 2), 1, 2], 42)
        assert [(u, v, str(w)) for u, v, w in g.edges] == [
            ("0", "2", "1"), ("0", "3", "1/2"), ("1", "3", "1"), ("1", "4", "1/2"), ("1", "5", "2"), ("3", "5", "1")]
        assert g.declared_capacity == {"0": 1, "1": 1, "2": 3, "3": 2, "4": 2, "5": 2}
        assert g == gen_random(6, 0.5, (1, 3), [Fraction(1, 2), 1, 2], 42)

    def test_density_extremes(self):
        assert gen_random(5, 0.0, seed=1).m == 0
        g = gen_random(4, 1.0, seed=1)
        assert g.m == 6

    @pytest.mark.parametrize("args", [(-1, 0.5), (3, 1.5), (3, 0.5, (2, 1)), (3, 0.5, (1, 1), ())])
    def test_bad_parameters(self, args):
        with pytest.raises(ValueError):
            gen_random(*args)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_matchings(self, seed):
        g = gen_random(7, 0.5, (1, 3), [Fraction(1, 2), 1, 2], seed)
        assert is_c_matching(g, random_c_matching(g, seed))
        assert is_maximum_c_matching(g, random_maximum_c_matching(g, seed))

    @pytest.mark.parametrize("seed", range(20))
    def test_planted(self, seed):
        stems = random.Random(seed).choice([(1, 1), (2, 1), (1, 2), (2, 2)])
        inst = gen_planted(seed, stems)
        assert inst.graph.n == 2 * sum(stems) + 4
        assert is_c_matching(inst.graph, inst.matching)
        assert inst == gen_planted(seed, stems)


class TestIds:
    def test_small_cases(self):
        edge = MidsInstance(["u", "v"], [("u", "v")])
        assert len(mids_bruteforce(edge)) == 1 and len(greedy_ids(edge)) == 1
        path = MidsInstance(["u", "v", "w"], [("u", "v"), ("v", "w")])
        assert mids_bruteforce(path) == {"v"}
        c5 = MidsInstance([str(i) for i in range(5)], [(str(i), str((i + 1) % 5)) for i in range(5)])
        assert len(mids_bruteforce(c5)) == 2 and len(greedy_ids(c5)) == 2
        star = MidsInstance(["c", "1", "2", "3"], [("c", "1"), ("c", "2"), ("c", "3")])
        assert greedy_ids(star) == {"c"}

    def test_bad_source(self):
        with pytest.raises(ValueError):
            MidsInstance(["a"], [("a", "a")])
        with pytest.raises(ValueError):
            build_mids_reduction(MidsInstance([], []))

    @given(sources(max_n=7))
    @settings(max_examples=80, deadline=None)
    def test_greedy_is_independent_dominating(self, src):
        greedy = greedy_ids(src)
        assert is_independent_dominating(src, greedy)
        assert len(greedy) >= len(mids_bruteforce(src))


class TestReduction:
    def test_single_edge_counts(self):
        red = build_mids_reduction(MidsInstance(["u", "v"], [("u", "v")]))
        assert (red.graph.n, red.graph.m) == (20, 26)

    def test_single_vertex_counts(self):
        red = build_mids_reduction(MidsInstance(["v"], []))
        assert (red.graph.n, red.graph.m) == (5, 5)

    @given(sources(max_n=5))
    @settings(max_examples=40, deadline=None)
    def test_closed_form_counts(self, src):
        n, e = len(src.vertices), len(src.edges)
        red = build_mids_reduction(src)
        assert red.graph.n == n + 4 * n + 5 * n * e
        assert red.graph.m == sum(len(src.closed_neighborhood(v)) + 4 for v in src.vertices) + 7 * n * e
        assert all(w == 1 for _, _, w in red.graph.edges)

    def test_gadgets_of_a_degree_two_vertex(self):
        src = MidsInstance(["a", "v", "b"], [("a", "v"), ("v", "b")])
        red = build_mids_reduction(src)
        g = red.graph
        star = {x for x, _ in g.neighbors("v#1")}
        assert star == {"v", "a", "b", "v#2"}
        assert {frozenset(k) for k in g.edge_keys() if all(str(x).startswith("v#") for x in k)} == {
            K("v#1", "v#2"), K("v#2", "v#3"), K("v#3", "v#4"), K("v#2", "v#4")}
        assert g.capacity["v#1"] == 3
        assert g.capacity["v"] == 3 + 3 * 2
        assert [g.capacity[f"v#{i}"] for i in (2, 3, 4)] == [1, 1, 1]
        e = [f"a~v#2.{k}" for k in range(1, 6)]
        assert {x for x, _ in g.neighbors(e[0])} == {"a", "v", e[1], e[2]}
        assert [g.capacity[x] for x in e] == [2, 1, 2, 1, 1]
        assert {x for x, _ in g.neighbors(e[2])} == {e[0], e[3], e[4]}
        assert K(e[3], e[4]) in g.edge_keys()

    def test_forward_direction_single_edge(self):
        src = MidsInstance(["u", "v"], [("u", "v")])
        red = build_mids_reduction(src)
        assert not is_stable_graph(red.graph).stable
        s = mids_bruteforce(src)
        assert len(s) == 1
        assert is_stable_graph(remove_vertices(red.graph, s)).stable

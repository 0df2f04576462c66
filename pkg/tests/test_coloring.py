import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delta334.coloring import (
    Coloring,
    chromatic_number_exact,
    find_coloring_violation,
    greedy_chromatic_upper,
    heuristic_chromatic_upper,
    improve_coloring,
    lift_coloring,
)
from delta334.graph import TriangleGraph, build_delta334, induced_morphism
from delta334.generation import mod_p_codomain
from delta334.groups import ElementSet, order3_vertices, parse_group_spec
from delta334.elements import inverse, parametric_order3

import oracles
import toys


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 9))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    return TriangleGraph(range(n), edges)


class TestExact:
    @pytest.mark.parametrize("graph, chi", [
        (toys.cycle_graph(5), 3),
        (toys.cycle_graph(6), 2),
        (toys.complete_graph(4), 4),
        (toys.complete_bipartite(4, 4), 2),
        (toys.petersen_graph(), 3),
        (toys.path_graph(1), 1),
    ])
    def test_known_values(self, graph, chi):
        res = chromatic_number_exact(graph)
        assert res.exact and res.chi == chi
        assert find_coloring_violation(graph, res.coloring.colors) is None
        assert res.coloring.num_colors == chi

    def test_certificate_records_infeasible_k(self):
        res = chromatic_number_exact(toys.cycle_graph(5))
        assert res.certificate.get("infeasible_k") == 2
        assert res.certificate.get("exhausted") is True

    def test_empty_graph(self):
        res = chromatic_number_exact(TriangleGraph([], []))
        assert res.chi == 0

    def test_loops_rejected(self):
        g = TriangleGraph([0], [], loops=[0])
        with pytest.raises(ValueError):
            chromatic_number_exact(g)

    def test_node_budget_yields_valid_bounds(self):
        res = chromatic_number_exact(toys.petersen_graph(), node_budget=1)
        assert res.lower <= res.upper
        if res.coloring is not None:
            assert find_coloring_violation(toys.petersen_graph(),
                                           res.coloring.colors) is None

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_matches_exhaustive_oracle(self, graph):
        want, _ = oracles.oracle_chromatic(graph)
        res = chromatic_number_exact(graph)
        assert res.exact and res.chi == want


class TestHeuristics:
    @given(small_graphs())
    @settings(max_examples=40, deadline=None)
    def test_upper_bounds_bracket_exact(self, graph):
        exact = chromatic_number_exact(graph).chi
        greedy = greedy_chromatic_upper(graph)
        better = heuristic_chromatic_upper(graph, rounds=50)
        assert greedy.proper and better.proper
        assert exact <= better.num_colors <= greedy.num_colors

    def test_improve_never_increases(self):
        g = toys.petersen_graph()
        start = greedy_chromatic_upper(g)
        improved = improve_coloring(g, start, rounds=100)
        assert improved.proper
        assert improved.num_colors <= start.num_colors

    def test_improve_rejects_improper_input(self):
        g = toys.cycle_graph(5)
        bad = Coloring((0,) * 5, 1, False)
        with pytest.raises(ValueError):
            improve_coloring(g, bad)


class TestViolationDetection:
    def test_reports_first_bad_edge(self):
        g = toys.cycle_graph(4)
        assert find_coloring_violation(g, (0, 0, 1, 1)) == (0, 1)
        assert find_coloring_violation(g, (0, 1, 0, 1)) is None

    def test_loop_is_always_a_violation(self):
        g = TriangleGraph([0, 1], [(0, 1)], loops=[1])
        assert find_coloring_violation(g, (0, 1)) == (1, 1)

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            find_coloring_violation(toys.cycle_graph(3), (0, 1))


class TestLift:
    def test_lift_along_reduction_is_proper(self):
        mats = [parametric_order3(a, b, c)
                for a in range(2) for b in range(2) for c in range(2)]
        mats += [inverse(m) for m in mats]
        dom = build_delta334(ElementSet(mats))
        codomain = mod_p_codomain(2)
        morphism = induced_morphism(dom, 2, codomain).morphism
        assert morphism is not None
        base = heuristic_chromatic_upper(codomain, rounds=50)
        lifted = lift_coloring(morphism, base)
        assert lifted.proper
        assert lifted.num_colors <= base.num_colors

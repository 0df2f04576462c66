import pytest
from hypothesis import given
from hypothesis import strategies as st

from delta334.elements import Permutation, inverse, parametric_order3
from delta334.generation import mod_p_codomain
from delta334.graph import (
    TriangleGraph,
    build_delta334,
    edge_predicate,
    graph_isomorphic,
    identity_element_of,
    induced_morphism,
    kronecker_matches_direct_sum,
    kronecker_product,
)
from delta334.groups import ElementSet, order3_vertices, parse_group_spec

import oracles
import toys


def delta(text, include_identity=False):
    spec = parse_group_spec(text)
    return build_delta334(order3_vertices(spec, include_identity),
                          meta={"source": str(spec)})


class TestTriangleGraph:
    def test_rejects_self_edge(self):
        with pytest.raises(ValueError):
            TriangleGraph([0, 1], [(0, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            TriangleGraph([0, 1], [(0, 2)])

    def test_neighbors_sorted_and_dedup(self):
        g = TriangleGraph(range(3), [(2, 0), (0, 1), (1, 0)])
        assert g.neighbors(0) == (1, 2)
        assert g.edge_count == 2

    def test_adjacency_masks_match_neighbors(self):
        g = toys.petersen_graph()
        masks = g.adjacency_masks()
        for v in range(g.n):
            assert masks[v] == sum(1 << w for w in g.neighbors(v))

    def test_degree_histogram(self):
        assert toys.complete_bipartite(4, 4).degree_histogram() == {4: 8}

    def test_vertex_of_round_trip(self):
        g = delta("S4")
        for v in range(g.n):
            assert g.vertex_of(g.labels[v]) == v


class TestEdgePredicate:
    @pytest.mark.parametrize("text", ["S4", "SL2(3)", "A5"])
    def test_matches_literal_fourth_power(self, text):
        verts = list(order3_vertices(parse_group_spec(text)))
        for i, x in enumerate(verts):
            for y in verts[i + 1:]:
                want = oracles.oracle_product_order_divides_4(x, y)
                assert edge_predicate(x, y) == want

    def test_identity_gets_a_loop(self):
        g = delta("Z3", include_identity=True)
        e = identity_element_of(ElementSet(g.labels))
        assert g.vertex_of(e) in g.loops


class TestBuild:
    def test_a4_is_k44(self):
        g = delta("A4")
        assert (g.n, g.edge_count) == (8, 16)
        assert g.degree_histogram() == {4: 8}

    def test_rejects_wrong_order_elements(self):
        els = ElementSet([Permutation((1, 0, 2))])  # a transposition
        with pytest.raises(ValueError):
            build_delta334(els)

    def test_mod3_fast_path_matches_generic(self):
        # SL3(3) takes the vectorized route; spot-check rows against the
        # pairwise predicate.
        g = mod_p_codomain(3)
        verts = g.labels
        import random
        rng = random.Random(7)
        for v in rng.sample(range(g.n), 12):
            nbrs = {w for w in range(g.n)
                    if w != v and edge_predicate(verts[v], verts[w])}
            assert nbrs == set(g.neighbors(v))


class TestKronecker:
    @pytest.mark.parametrize("lt, rt", [
        ("Z3", "Z3"), ("Z3", "A4"), ("S4", "Z3"), ("A4", "S4"), ("S4", "S4"),
    ])
    def test_product_lemma(self, lt, rt):
        lg = delta(lt, include_identity=True)
        rg = delta(rt, include_identity=True)
        prod = kronecker_product(lg, rg)
        direct = delta(f"sum({lt},{rt})", include_identity=True)
        ok, reason = kronecker_matches_direct_sum(prod, direct)
        assert ok, reason

    def test_degrees_multiply(self):
        # for loopless factors, deg(i, j) = deg(i) * deg(j)
        g1, g2 = toys.cycle_graph(5), toys.complete_bipartite(2, 3)
        prod = kronecker_product(g1, g2)
        for i in range(g1.n):
            for j in range(g2.n):
                assert prod.degree(i * g2.n + j) == g1.degree(i) * g2.degree(j)

    def test_loop_vertex_copies_other_factor(self):
        single = TriangleGraph(["e"], [], loops=[0])
        g = toys.petersen_graph()
        prod = kronecker_product(single, g)
        assert prod.n == g.n and prod.edge_count == g.edge_count

    def test_identity_dropped_breaks_identification(self):
        lg, rg = delta("Z3"), delta("Z3")
        prod = kronecker_product(lg, rg)
        direct = delta("sum(Z3,Z3)")
        ok, reason = kronecker_matches_direct_sum(prod, direct)
        assert not ok and "vertex counts differ" in reason


class TestInducedMorphism:
    def test_parametric_family_maps_mod_2(self):
        mats = [parametric_order3(a, b, 0) for a in range(2) for b in range(2)]
        mats += [inverse(m) for m in mats]
        dom = build_delta334(ElementSet(mats))
        report = induced_morphism(dom, 2, mod_p_codomain(2))
        assert report.ok
        assert dom.edge_count > 0
        m = report.morphism
        for i, j in dom.edges():
            assert m.codomain.has_edge(m.vertex_map[i], m.vertex_map[j])

    def test_non_matrix_domain_rejected(self):
        with pytest.raises(ValueError):
            induced_morphism(delta("S4"), 2, mod_p_codomain(2))


class TestIsomorphism:
    def test_finds_mapping_to_k44(self):
        g = delta("A4")
        k44 = toys.complete_bipartite(4, 4)
        mapping = graph_isomorphic(g, k44)
        assert mapping is not None
        assert sorted(mapping) == list(range(8))
        for i, j in g.edges():
            assert k44.has_edge(mapping[i], mapping[j])

    def test_distinguishes_same_degree_sequence(self):
        # C6 and 2xC3 are 2-regular on six vertices but not isomorphic
        c6 = toys.cycle_graph(6)
        c3c3 = toys.disjoint_union(toys.cycle_graph(3), toys.cycle_graph(3))
        assert graph_isomorphic(c6, c3c3) is None

    def test_size_cap(self):
        big = toys.path_graph(101)
        with pytest.raises(ValueError):
            graph_isomorphic(big, big)

    @given(st.integers(4, 8), st.randoms(use_true_random=False))
    def test_relabeling_always_found(self, n, rng):
        g = toys.cycle_graph(n)
        perm = list(range(n))
        rng.shuffle(perm)
        edges = [(min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in g.edges()]
        h = TriangleGraph(range(n), edges)
        mapping = graph_isomorphic(g, h)
        assert mapping is not None
        for i, j in g.edges():
            assert h.has_edge(mapping[i], mapping[j])

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.generator.random_instances import gen_bipartite, gen_quotient_pair
from src.lattice.core import GroundSet, bounding_box
from src.lattice.errors import EmptyResult, UsageError
from src.linking.bipartite import (
    bipartite_graph,
    compose_graphs,
    from_bipartite_matchings,
    from_bipartite_subsets,
    from_matrix,
    transversal_independent_sets,
)
from src.linking.linking_sets import (
    LinkingSet,
    identity_on_box,
    induce,
    left_set,
    nonregular_fixture,
    product,
    right_set,
    selector_linking_set,
    translate_via_induction,
    truncate_via_induction,
)
from src.msets.mconvex import MConvexSet, check_m_convex, submodular_to_set
from src.msets.operations import translate, truncate
from src.quotient.characterizations import check_exchange


def test_edge_subset_linking_set_of_k32(fx):
    G = fx("k32_graph")
    L = from_bipartite_subsets(G)
    # 2^6 edge subsets collapse onto 54 distinct degree vectors
    assert len(L) == 54
    assert (1, 1, 1, -3, 0) in L
    assert left_set(L).top().points == ((2, 2, 2),)
    assert induce(fx("k32_input"), L).points == fx("k32_induced").points


def test_unit_box_of_subsets_is_matchings(fx):
    G = fx("k32_graph")
    M = from_bipartite_matchings(G)
    assert len(M) == 10
    in_box = [z for z in from_bipartite_subsets(G).points
              if all(0 <= c <= 1 for c in z[:3]) and all(-1 <= c <= 0 for c in z[3:])]
    assert tuple(sorted(in_box)) == M.points


def test_edgeless_graph():
    G = bipartite_graph(2, 2, [])
    assert from_bipartite_matchings(G).points == ((0, 0, 0, 0),)
    assert from_bipartite_subsets(G).points == ((0, 0, 0, 0),)


def test_matrix_linking_set():
    L = from_matrix([[1, 0], [0, 1]])
    assert left_set(L).points == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert check_m_convex(L.points)
    singular = from_matrix([[1, 1], [1, 1]])
    assert (1, 1, -1, -1) not in singular
    assert (1, 0, 0, -1) in singular


def test_from_matrix_minors_are_exact():
    # det [[1/2, 1], [1, 2]] = 0 only over the rationals
    L = from_matrix([["1/2", 1], [1, 2]])
    assert (1, 1, -1, -1) not in L
    assert all((1, 0, 0, -1) in M for M in [L, from_matrix([[Fraction(1, 3), 0], [0, 1]])])
    near = from_matrix([[Fraction(1, 2), 1], [1, Fraction(2000001, 1000000)]])
    assert (1, 1, -1, -1) in near


def test_transversal_independent_sets():
    G = bipartite_graph(3, 1, [(0, 0), (1, 0)])
    assert transversal_independent_sets(G) == [(0, 0, 0), (0, 1, 0), (1, 0, 0)]


def test_induce_rejects_mismatch_and_empty(fx):
    L = from_bipartite_subsets(fx("k32_graph"))
    with pytest.raises(UsageError):
        induce(fx("running_P"), L)
    far = MConvexSet(GroundSet(2), [(9, 0)])
    with pytest.raises(EmptyResult):
        induce(far, L)


def test_identity_on_box(running_P):
    lo, hi = bounding_box(running_P.points)
    I = identity_on_box(lo, hi)
    assert induce(running_P, I).points == running_P.points
    assert product(I, I).points == I.points
    assert identity_on_box((0,), (0,)).points == ((0, 0),)


def test_product_with_identity(fx):
    L = from_bipartite_subsets(fx("k32_graph"))
    lo, hi = bounding_box([tuple(-c for c in r) for r in right_set(L).points])
    assert product(L, identity_on_box(lo, hi)).points == L.points


def test_selector_picks_layers(fx):
    R = fx("running_projection")
    S = selector_linking_set(R)
    assert len(S) == len(R)
    assert induce(MConvexSet(GroundSet(1), [(1,)]), S).points == R.layer(1).points


def test_structured_operations_match_direct_ones(running_P):
    assert translate_via_induction(running_P, (1, -1, 0)).points == translate(running_P, (1, -1, 0)).points
    assert truncate_via_induction(running_P).points == truncate(running_P).points


def test_nonregular_fixture(fx):
    N = nonregular_fixture(3)
    assert len(N) == 7
    assert N.points == fx("nonregular_linking").points
    assert not check_m_convex(N.points)
    assert len(product(N, N)) == 10


def test_linking_set_certifies():
    with pytest.raises(UsageError):
        LinkingSet(GroundSet(1), GroundSet(1), [(2, 0), (0, 2)])


@settings(max_examples=15, deadline=None)
@given(
    g_edges=st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))),
    h_edges=st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))),
)
def test_matching_products_embed_in_composed_graph(g_edges, h_edges):
    G = bipartite_graph(2, 2, sorted(g_edges))
    H = bipartite_graph(2, 2, sorted(h_edges))
    composed = from_bipartite_matchings(compose_graphs(G, H))
    prod = product(from_bipartite_matchings(G), from_bipartite_matchings(H))
    assert set(prod.points) <= set(composed.points)


def _nonneg_quotient_pair(seed, n):
    p, q = gen_quotient_pair(seed, n, 1)
    P, Q = submodular_to_set(p), submodular_to_set(q)
    lo, _ = bounding_box(P.points + Q.points)
    shift = [-c for c in lo]
    return translate(P, shift), translate(Q, shift)


@settings(max_examples=15, deadline=None)
@given(seeds=st.tuples(*[st.integers(min_value=0, max_value=2**31 - 1)] * 3))
def test_product_is_associative(seeds):
    G1, G2, G3 = (from_bipartite_subsets(gen_bipartite(s, 2, 2)) for s in seeds)
    assert product(product(G1, G2), G3).points == product(G1, product(G2, G3)).points


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1), graph_seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_induction_keeps_quotients(seed, graph_seed):
    P, Q = _nonneg_quotient_pair(seed, 2)
    assert check_exchange(P, Q)
    G = from_bipartite_subsets(gen_bipartite(graph_seed, 2, 2, density=0.75))
    try:
        IP, IQ = induce(P, G), induce(Q, G)
    except EmptyResult:
        return
    assert check_m_convex(IP.points) and check_m_convex(IQ.points)
    assert check_exchange(IP, IQ)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1), graph_seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_induction_is_a_product_with_the_selector(seed, graph_seed):
    P, _ = _nonneg_quotient_pair(seed, 2)
    G = from_bipartite_subsets(gen_bipartite(graph_seed, 3, 2))
    try:
        induced = induce(P, G)
    except EmptyResult:
        with pytest.raises(EmptyResult):
            product(G, selector_linking_set(P))
        return
    assert left_set(product(G, selector_linking_set(P))).points == induced.points

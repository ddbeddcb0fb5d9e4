from fractions import Fraction

import pytest

from src.lattice.core import INF, GroundSet
from src.lattice.errors import EmptyResult, UsageError
from src.linking.bipartite import bipartite_graph
from src.functions.mfunc import (
    MFunc,
    MNatFunc,
    check_m_convex_fn,
    check_mnat_fn,
    convolution,
    elongation_fn,
    indicator,
    induce_fn,
    left_function,
    minimizer,
    tilt,
    truncation_fn,
    union_of_graphs,
    weighted_bipartite_linking_function,
)
from src.msets.mconvex import MConvexSet

E2 = GroundSet(2)


@pytest.fixture
def square():
    """x -> x_1^2 on the rank-2 simplex layer."""
    return MFunc(E2, {(0, 2): 0, (1, 1): 1, (2, 0): 4})


def test_values_are_exact_and_inf_off_domain(square):
    assert square((1, 1)) == Fraction(1)
    assert square((3, -1)) is INF
    assert square.rank == 2
    assert square.min_value == 0
    assert len(square) == 3
    assert square.dom_set().points == ((0, 2), (1, 1), (2, 0))


def test_rational_values():
    f = MFunc(E2, [((1, 0), "1/2"), ((0, 1), Fraction(3, 4))])
    assert f((1, 0)) == Fraction(1, 2)
    assert f.min_value == Fraction(1, 2)


def test_construction_errors():
    with pytest.raises(UsageError, match="exchange"):
        MFunc(E2, {(0, 2): 0, (1, 1): 5, (2, 0): 0})
    with pytest.raises(UsageError, match="twice"):
        MFunc(E2, [((0, 1), 0), ((0, 1), 1)])
    with pytest.raises(UsageError, match="nonempty"):
        MFunc(E2, {})


def test_indicator_is_m_convex(running_P):
    f = indicator(running_P, 3)
    assert check_m_convex_fn(f)
    assert minimizer(f).points == running_P.points
    assert f((0, 0, 1)) == 3


def test_minimizer_and_tilt(square):
    assert minimizer(square).points == ((0, 2),)
    assert minimizer(square, (2, 0)).points == ((1, 1),)
    assert minimizer(square, (1, 0)).points == ((0, 2), (1, 1))
    assert tilt(square, (2, 0), (Fraction(1, 2), 0)) == 3
    with pytest.raises(UsageError):
        minimizer(square, (1, 0, 0))


def test_convolution(square):
    simplex = indicator(MConvexSet(E2, [(0, 1), (1, 0)]))
    h = convolution(square, simplex, verify=True)
    assert h.as_dict() == {(0, 3): 0, (1, 2): 0, (2, 1): 1, (3, 0): 4}


def test_union_of_graphs(fx):
    f0, f1, f2 = fx("layer_fill_chain")
    with pytest.raises(UsageError, match="overlap"):
        union_of_graphs([f1, f1])
    shifted = MFunc(E2, {(1, 1): 2}, verify=False)
    h = union_of_graphs([f0, f1, shifted])
    assert isinstance(h, MNatFunc)
    assert check_mnat_fn(h)
    assert h.layer_sums() == [0, 1, 2]
    assert h.top().as_dict() == {(1, 1): 2}
    assert h.bottom().as_dict() == {(0, 0): 0}
    assert not check_mnat_fn(union_of_graphs([f0, f1, f2]))
    with pytest.raises(UsageError, match="M♮"):
        MNatFunc(E2, {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})


def test_truncation_and_elongation(square):
    t = truncation_fn(square)
    assert t.as_dict() == {(-1, 2): 0, (0, 1): 0, (1, 0): 1, (2, -1): 4}
    assert check_m_convex_fn(t)
    e = elongation_fn(square)
    assert e.rank == 3
    assert e((1, 2)) == 0
    assert e((2, 1)) == 1
    assert check_m_convex_fn(e)


def test_weighted_linking_function():
    G = bipartite_graph(2, 1, [(0, 0, 3), (1, 0, 5)])
    gamma = weighted_bipartite_linking_function(G)
    assert gamma.as_dict() == {(0, 0, 0): 0, (1, 0, -1): 3, (0, 1, -1): 5}
    assert check_m_convex_fn(gamma)
    r = MFunc(GroundSet(1), {(1,): 0})
    assert induce_fn(r, gamma, 2).as_dict() == {(1, 0): 3, (0, 1): 5}
    left = left_function(gamma, 2)
    assert left.as_dict() == {(0, 0): 0, (1, 0): 3, (0, 1): 5}
    assert check_mnat_fn(left)


def test_induce_errors():
    G = bipartite_graph(2, 1, [(0, 0, 3)])
    gamma = weighted_bipartite_linking_function(G)
    with pytest.raises(EmptyResult):
        induce_fn(MFunc(GroundSet(1), {(4,): 0}), gamma, 2)
    with pytest.raises(UsageError):
        induce_fn(MFunc(E2, {(1, 0): 0}), gamma, 2)
    with pytest.raises(UsageError):
        left_function(gamma, 3)

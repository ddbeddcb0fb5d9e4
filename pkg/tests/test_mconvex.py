from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.config.caps import Caps
from src.generator.random_instances import gen_submodular
from src.lattice.core import GroundSet
from src.lattice.errors import CapExceeded, UsageError
from src.msets.mconvex import (
    MConvexSet,
    MNatSet,
    SetFunction,
    SubmodularFn,
    check_m_convex,
    check_mnat_convex,
    check_submodular,
    dual,
    greedy_vertex,
    modular,
    set_to_bounds,
    set_to_submodular,
    submodular_to_set,
    vertex_set,
)


def test_running_sets_are_m_convex(running_P, running_Q):
    assert check_m_convex(running_P)
    assert check_m_convex(running_Q)
    assert running_P.rank == 1
    assert running_Q.rank == -5
    assert len(running_P) == 8
    assert len(running_Q) == 6


def test_exchange_failure_is_detected():
    assert not check_m_convex([(2, 0), (0, 2)])
    with pytest.raises(UsageError, match="not M-convex"):
        MConvexSet(GroundSet(2), [(2, 0), (0, 2)])


def test_mixed_sums_are_not_m_convex():
    assert not check_m_convex([(1, 0), (1, 1)])
    assert check_mnat_convex([(1, 0), (1, 1)])


def test_points_are_canonical():
    S = MConvexSet(GroundSet(2), [(1, 0), (0, 1), (1, 0)])
    assert S.points == ((0, 1), (1, 0))
    assert (1, 0) in S
    with pytest.raises(UsageError):
        MConvexSet(GroundSet(2), [])
    with pytest.raises(UsageError):
        MConvexSet(GroundSet(2), [(1, 0, 0)])


def test_set_to_submodular_matches_running_table(running_P, running_p, running_Q, running_q):
    assert set_to_submodular(running_P).table == running_p.table
    assert set_to_submodular(running_Q).table == running_q.table


def test_submodular_to_set_round_trips_running_pair(running_P, running_p, running_Q, running_q):
    assert submodular_to_set(running_p).points == running_P.points
    assert submodular_to_set(running_q).points == running_Q.points


def test_greedy_vertex_maximizes_first_element_first(running_p):
    assert greedy_vertex(running_p, (2, 1, 0)) == (-1, 0, 2)
    assert greedy_vertex(running_p, (0, 1, 2)) == (1, 1, -1)
    with pytest.raises(UsageError, match="permutation"):
        greedy_vertex(running_p, (0, 0, 1))


def test_vertex_sets(running_p, running_q):
    assert vertex_set(running_p) == [(-1, 0, 2), (-1, 1, 1), (0, -1, 2), (1, -1, 1), (1, 1, -1)]
    assert vertex_set(running_q) == [(-3, -1, -1), (-1, -3, -1), (-1, -1, -3)]


def test_vertex_sweep_respects_cap(running_p):
    with pytest.raises(CapExceeded) as info:
        vertex_set(running_p, Caps(vertex_sweep_n=2))
    assert info.value.cap == "vertex_sweep_n"


def test_dual(running_p):
    d = dual(running_p)
    assert d(0b001) == -1
    assert d(0b111) == running_p.rank
    assert d(0) == 0
    assert dual(d).table == running_p.table


def test_submodular_validation():
    E = GroundSet(2)
    assert check_submodular([0, 1, 1, 2])
    assert not check_submodular([0, 1, 1, 3])
    with pytest.raises(UsageError, match="not submodular"):
        SubmodularFn(E, [0, 1, 1, 3])
    with pytest.raises(UsageError, match="∅"):
        SubmodularFn(E, [1, 1, 1, 2])
    with pytest.raises(UsageError, match="entries"):
        SetFunction(E, [0, 1, 1])


def test_modular_and_sum():
    E = GroundSet(2)
    m = modular(E, [2, -1])
    assert m.table == (0, 2, -1, 1)
    assert submodular_to_set(m).points == ((2, -1),)
    s = m + SubmodularFn(E, [0, 1, 1, 1])
    assert s.table == (0, 3, 0, 2)


def test_rational_tables_are_rejected_for_enumeration():
    p = SubmodularFn(GroundSet(1), [0, Fraction(1, 2)])
    assert not p.is_integral
    with pytest.raises(UsageError, match="integer"):
        submodular_to_set(p)


def test_set_to_bounds_describes_projection(fx):
    R = fx("running_projection")
    upper, lower = set_to_bounds(R)
    assert upper.table == (0, 1, 1, 2)
    assert lower.table == (0, -1, -1, -1)


def test_mnat_layers(fx):
    R = fx("running_projection")
    assert isinstance(R, MNatSet)
    assert R.layer_sums() == [-1, 0, 1, 2]
    assert R.top().points == ((1, 1),)
    assert R.bottom().points == ((-1, 0), (0, -1))
    assert [L.rank for L in R.layers()] == [-1, 0, 1, 2]
    with pytest.raises(UsageError):
        R.layer(5)


def test_not_mnat():
    assert not check_mnat_convex([(0, 0), (1, 1)])
    with pytest.raises(UsageError, match="M♮"):
        MNatSet(GroundSet(2), [(0, 0), (1, 1)])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1), n=st.integers(min_value=1, max_value=3))
def test_correspondence_round_trip(seed, n):
    p = gen_submodular(seed, n, 2)
    P = submodular_to_set(p)
    assert check_m_convex(P)
    assert set_to_submodular(P).table == p.table
    assert set(vertex_set(p)) <= P.members

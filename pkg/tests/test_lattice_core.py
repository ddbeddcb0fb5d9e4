from fractions import Fraction

import pytest

from src.lattice.core import (
    INF,
    GroundSet,
    as_point,
    bounding_box,
    check_width,
    coord_sum,
    ext_add,
    ext_lt,
    ext_min,
    format_rat,
    mask_elements,
    step,
    supp_minus,
    supp_plus,
    to_rat,
)
from src.lattice.errors import CapExceeded, UsageError


def test_supports_on_running_points():
    assert supp_plus((0, 0, 1), (1, 1, -1)) == 0b100
    assert supp_plus((1, 1, -1), (0, 0, 1)) == 0b011
    assert supp_minus((0, 0, 1), (1, 1, -1)) == 0b011


def test_coord_sum():
    assert coord_sum((1, 1, -1), 0b011) == 2
    assert coord_sum((-1, 0, 2), 0b100) == 2
    assert coord_sum((-1, 0, 2)) == 1
    with pytest.raises(UsageError):
        coord_sum((1, 2), 0b100)


def test_step_and_width():
    assert step((0, 0), plus=0, minus=1) == (1, -1)
    assert step((3, 3), minus=0) == (2, 3)
    with pytest.raises(UsageError):
        check_width((1, 2, 3), 2)


def test_ground_set_naming():
    E = GroundSet(3)
    assert E.full_mask == 0b111
    assert E.format_mask(0b101) == "{1,3}"
    assert list(mask_elements(0b101)) == [0, 2]
    assert E.mask_of([0, 2]) == 0b101
    with pytest.raises(UsageError, match="element 4"):
        E.mask_of([3])


def test_ground_set_validation():
    with pytest.raises(UsageError):
        GroundSet(0)
    with pytest.raises(UsageError):
        GroundSet(2, ("a", "a"))


def test_ground_set_unions():
    assert GroundSet(2).disjoint_union(GroundSet(3)) == GroundSet(5)
    mixed = GroundSet(2).disjoint_union(GroundSet(1, ("e",)))
    assert mixed.names() == ("v1", "v2", "e")
    assert GroundSet(2, ("a", "b")).extended().names() == ("a", "b", "e")
    assert GroundSet(2).restrict(0b10).size == 1


def test_rationals():
    assert to_rat("3/6") == Fraction(1, 2)
    assert to_rat(4) == Fraction(4)
    assert format_rat(Fraction(2)) == "2/1"
    with pytest.raises(UsageError):
        to_rat(True)
    with pytest.raises(UsageError):
        to_rat("1/0")


def test_extended_arithmetic():
    assert ext_add(INF, Fraction(1)) is INF
    assert ext_add(Fraction(1), Fraction(2)) == 3
    assert ext_min([]) is INF
    assert ext_min([INF, Fraction(-1), Fraction(2)]) == -1
    assert ext_lt(Fraction(10**9), INF)
    assert not ext_lt(INF, INF)


def test_points():
    assert as_point([1, -2]) == (1, -2)
    with pytest.raises(UsageError):
        as_point([1, True])
    with pytest.raises(UsageError):
        as_point([1.5])
    assert bounding_box([(0, 3), (2, 1)]) == ((0, 1), (2, 3))


def test_cap_exceeded_message():
    err = CapExceeded("atlas_pairs", 3000, 2000)
    assert str(err) == "atlas_pairs: 3000 exceeds cap 2000"
    assert err.limit == 2000

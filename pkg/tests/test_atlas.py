from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.config.caps import Caps
from src.functions.atlas import lower_faces, minimizer_atlas
from src.functions.mfunc import MFunc, check_m_convex_fn, minimizer, truncation_fn
from src.generator.random_instances import gen_function_pair, perturb_m_func
from src.lattice.core import GroundSet
from src.lattice.errors import CapExceeded
from src.msets.mconvex import check_m_convex
from src.msets.operations import minkowski_sum

E2 = GroundSet(2)


def _argmin(Z, u):
    heights = [z[-1] - sum(a * b for a, b in zip(u, z[:-1])) for z in Z]
    best = min(heights)
    return frozenset(i for i, h in enumerate(heights) if h == best)


def test_lower_faces_of_a_tent():
    Z = [(0, 0), (1, 1), (2, 0)]
    faces = dict(lower_faces(Z))
    assert set(faces) == {frozenset({0}), frozenset({2}), frozenset({0, 2})}
    assert faces[frozenset({0, 2})] == (0,)
    for face, u in faces.items():
        assert _argmin(Z, u) == face


def test_lower_faces_with_rational_heights():
    Z = [(0, 0), (1, Fraction(1, 3)), (2, 1)]
    faces = dict(lower_faces(Z))
    assert set(faces) == {frozenset(s) for s in ({0}, {1}, {2}, {0, 1}, {1, 2})}
    assert faces[frozenset({0, 1})] == (Fraction(1, 3),)
    assert faces[frozenset({1, 2})] == (Fraction(2, 3),)
    for face, u in faces.items():
        assert all(isinstance(c, Fraction) for c in u)
        assert _argmin(Z, u) == face


def test_lower_faces_of_a_flat_segment():
    Z = [(0, 1, 0), (1, 0, 0)]
    faces = dict(lower_faces(Z))
    assert set(faces) == {frozenset({0}), frozenset({1}), frozenset({0, 1})}
    for face, u in faces.items():
        assert _argmin(Z, u) == face


def test_single_point():
    assert lower_faces([(3, 1, Fraction(2))]) == [(frozenset({0}), (Fraction(0), Fraction(0)))]


def test_atlas_cells_split_the_convolution():
    f = MFunc(E2, {(0, 2): 0, (1, 1): 1, (2, 0): 4})
    g = truncation_fn(f)
    atlas = minimizer_atlas(f, g)
    assert len(atlas) > 0
    for cell in atlas:
        assert cell.fcell.points == minimizer(f, cell.u).points
        assert minkowski_sum(cell.fcell, cell.gcell).points == tuple(sorted(cell.hcell))


def test_atlas_respects_cap():
    f = MFunc(E2, {(0, 2): 0, (1, 1): 1, (2, 0): 4})
    with pytest.raises(CapExceeded) as info:
        minimizer_atlas(f, f, Caps(atlas_pairs=4))
    assert info.value.cap == "atlas_pairs"


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_minkowski_split_on_generated_pairs(seed):
    f, g = gen_function_pair(seed, 2)
    for cell in minimizer_atlas(f, g):
        assert minkowski_sum(cell.fcell, cell.gcell).points == tuple(sorted(cell.hcell))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_exchange_inequality_iff_every_minimizer_is_m_convex(seed):
    f = perturb_m_func(seed, 2)
    cells = minimizer_atlas(f, f, Caps(atlas_pairs=4000))
    assert check_m_convex_fn(f) == all(check_m_convex(cell.fcell) for cell in cells)


def test_dropped_middle_point_breaks_both_sides():
    f = MFunc(E2, {(0, 2): 0, (2, 0): 0}, verify=False)
    assert not check_m_convex_fn(f)
    assert not all(check_m_convex(cell.fcell) for cell in minimizer_atlas(f, f))

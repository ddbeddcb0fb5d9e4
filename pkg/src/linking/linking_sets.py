from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from src.lattice.core import GroundSet, LatticePoint, bounding_box, check_width, neg, step, unit
from src.lattice.errors import EmptyResult, UsageError
from src.msets.mconvex import MConvexSet, MNatSet, canonical_points, check_m_convex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkingSet:
    """
    M-convex set on V ⊔ U. A point is stored as (x, -y): the first
    `left.size` coordinates are x, the rest are the negated right part.
    """
    left: GroundSet
    right: GroundSet
    points: Tuple[LatticePoint, ...]

    def __init__(self, left: GroundSet, right: GroundSet, points: Iterable[Sequence[int]], verify: bool = True):
        pts = canonical_points(points, left.size + right.size)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "points", pts)
        if verify and not check_m_convex(pts):
            raise UsageError(f"linking set with {len(pts)} points is not M-convex")

    @property
    def left_size(self) -> int:
        return self.left.size

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, z) -> bool:
        return tuple(z) in frozenset(self.points)

    def split(self, z: LatticePoint) -> Tuple[LatticePoint, LatticePoint]:
        v = self.left.size
        return z[:v], z[v:]

    def as_set(self) -> MConvexSet:
        return MConvexSet(self.left.disjoint_union(self.right), self.points, verify=False)

    def by_right(self) -> Dict[LatticePoint, List[LatticePoint]]:
        """Stored right part -> left parts."""
        index: Dict[LatticePoint, List[LatticePoint]] = {}
        for z in self.points:
            x, r = self.split(z)
            index.setdefault(r, []).append(x)
        return index

    def by_left(self) -> Dict[LatticePoint, List[LatticePoint]]:
        index: Dict[LatticePoint, List[LatticePoint]] = {}
        for z in self.points:
            x, r = self.split(z)
            index.setdefault(x, []).append(r)
        return index


def left_set(G: LinkingSet) -> MNatSet:
    return MNatSet(G.left, {G.split(z)[0] for z in G.points}, verify=False)


def right_set(G: LinkingSet) -> MNatSet:
    """Projection onto U, in stored (negated) coordinates."""
    return MNatSet(G.right, {G.split(z)[1] for z in G.points}, verify=False)


def induce(W: Union[MConvexSet, MNatSet], G: LinkingSet) -> Union[MConvexSet, MNatSet]:
    """{x : exists y in W with (x, -y) in G}."""
    if W.n != G.right.size:
        raise UsageError(f"set on {W.n} elements cannot be induced through a linking set with |U|={G.right.size}")
    index = G.by_right()
    out = set()
    for y in W.points:
        out.update(index.get(neg(y), ()))
    if not out:
        raise EmptyResult("induction is empty")
    logger.debug("induce: |W|=%d, |G|=%d -> %d points", len(W), len(G), len(out))
    if isinstance(W, MConvexSet):
        return MConvexSet(G.left, out, verify=False)
    return MNatSet(G.left, out, verify=False)


def product(G: LinkingSet, D: LinkingSet, verify: bool = False) -> LinkingSet:
    """G * D = {(x, -z) : (x, -y) in G, (y, -z) in D}, joined on y."""
    if G.right.size != D.left.size:
        raise UsageError(f"cannot compose: |U|={G.right.size} on the left factor, |U|={D.left.size} on the right")
    d_index = D.by_left()
    out = set()
    for z in G.points:
        x, r = G.split(z)
        for s in d_index.get(neg(r), ()):
            out.add(x + s)
    if not out:
        raise EmptyResult("linking-set product is empty")
    return LinkingSet(G.left, D.right, out, verify=verify)


def identity_on_box(a: Sequence[int], b: Sequence[int]) -> LinkingSet:
    """{(x, -x) : a <= x <= b}."""
    check_width(b, len(a), "box upper corner")
    if any(lo > hi for lo, hi in zip(a, b)):
        raise UsageError(f"box corners must satisfy a <= b, got a={list(a)}, b={list(b)}")
    ground = GroundSet(len(a))
    ranges = [range(lo, hi + 1) for lo, hi in zip(a, b)]
    return LinkingSet(ground, ground, (x + neg(x) for x in itertools.product(*ranges)), verify=False)


def selector_linking_set(P: Union[MConvexSet, MNatSet]) -> LinkingSet:
    """Δ_P = {(y, -y(E)) : y in P}; inducing (k) through it selects layer k of P."""
    return LinkingSet(P.ground, GroundSet(1), (y + (-sum(y),) for y in P.points), verify=False)


def translation_linking_set(box: Tuple[LatticePoint, LatticePoint], v: Sequence[int]) -> LinkingSet:
    """{(x + v, -x) : x in box}; the unbounded version restricted to the box."""
    lo, hi = box
    check_width(v, len(lo), "translation vector")
    ground = GroundSet(len(lo))
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    pts = (tuple(c + d for c, d in zip(x, v)) + neg(x) for x in itertools.product(*ranges))
    return LinkingSet(ground, ground, pts, verify=False)


def truncation_linking_set(box: Tuple[LatticePoint, LatticePoint]) -> LinkingSet:
    """{(y - e_i, -y) : y in box, i in E}."""
    lo, hi = box
    n = len(lo)
    ground = GroundSet(n)
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    pts = (step(y, minus=i) + neg(y) for y in itertools.product(*ranges) for i in range(n))
    return LinkingSet(ground, ground, pts, verify=False)


def translate_via_induction(P: MConvexSet, v: Sequence[int]) -> MConvexSet:
    out = induce(P, translation_linking_set(bounding_box(P.points), v))
    return MConvexSet(P.ground, out.points, verify=False)


def truncate_via_induction(P: MConvexSet) -> MConvexSet:
    out = induce(P, truncation_linking_set(bounding_box(P.points)))
    return MConvexSet(P.ground, out.points, verify=False)


def nonregular_fixture(n: int = 3) -> LinkingSet:
    """{(e_i, -e_j) : i != j} ∪ {0}; stored as raw points, not certified."""
    ground = GroundSet(n)
    zero = (0,) * n
    pts = [unit(n, i) + neg(unit(n, j)) for i in range(n) for j in range(n) if i != j]
    pts.append(zero + zero)
    return LinkingSet(ground, ground, pts, verify=False)

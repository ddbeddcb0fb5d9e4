from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.config.caps import Caps, DEFAULT_CAPS
from src.lattice.core import (
    GroundSet,
    LatticePoint,
    SubsetMask,
    check_width,
    mask_elements,
    step,
    supp_plus,
)
from src.lattice.errors import CapExceeded, UsageError

logger = logging.getLogger(__name__)

Value = Union[int, Fraction]


# -----------------------------
# Point-set axioms
# -----------------------------

def points_of(S) -> Tuple[LatticePoint, ...]:
    """Accept an MConvexSet/MNatSet or any iterable of points."""
    if isinstance(S, (MConvexSet, MNatSet)):
        return S.points
    return tuple(tuple(x) for x in S)


def canonical_points(points: Iterable[Sequence[int]], n: int) -> Tuple[LatticePoint, ...]:
    pts = set()
    for x in points:
        x = tuple(x)
        check_width(x, n)
        pts.add(x)
    if not pts:
        raise UsageError("point set must be nonempty")
    return tuple(sorted(pts))


def _exchange_ok(x: LatticePoint, y: LatticePoint, members: frozenset) -> bool:
    """For every i in supp+(x-y) some j in supp-(x-y) keeps both x-e_i+e_j and y+e_i-e_j inside."""
    plus = supp_plus(x, y)
    minus = supp_plus(y, x)
    for i in mask_elements(plus):
        if not any(
            step(x, plus=j, minus=i) in members and step(y, plus=i, minus=j) in members
            for j in mask_elements(minus)
        ):
            return False
    return True


def check_m_convex(S) -> bool:
    pts = points_of(S)
    if not pts:
        raise UsageError("check_m_convex needs a nonempty point set")
    n = len(pts[0])
    for x in pts:
        check_width(x, n)
    r = sum(pts[0])
    if any(sum(x) != r for x in pts):
        return False
    members = frozenset(pts)
    for x in pts:
        for y in pts:
            if x != y and not _exchange_ok(x, y, members):
                return False
    return True


def check_mnat_convex(S) -> bool:
    pts = points_of(S)
    if not pts:
        raise UsageError("check_mnat_convex needs a nonempty point set")
    n = len(pts[0])
    for x in pts:
        check_width(x, n)
    members = frozenset(pts)
    for x in pts:
        sx = sum(x)
        for y in pts:
            sy = sum(y)
            if sx > sy:
                if not any(
                    step(x, minus=i) in members and step(y, plus=i) in members
                    for i in mask_elements(supp_plus(x, y))
                ):
                    return False
            elif sx == sy and x != y:
                if not _exchange_ok(x, y, members):
                    return False
    return True


# -----------------------------
# Set types
# -----------------------------

@dataclass(frozen=True)
class MConvexSet:
    """
    Finite M-convex set: nonempty, constant coordinate sum (the rank),
    closed under the symmetric exchange step. Points are deduplicated and
    sorted so equal sets compare equal.
    """
    ground: GroundSet
    points: Tuple[LatticePoint, ...]

    def __init__(self, ground: GroundSet, points: Iterable[Sequence[int]], verify: bool = True):
        pts = canonical_points(points, ground.size)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "points", pts)
        if verify and not check_m_convex(pts):
            raise UsageError(f"point set of size {len(pts)} is not M-convex")

    @property
    def rank(self) -> int:
        return sum(self.points[0])

    @property
    def n(self) -> int:
        return self.ground.size

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        return tuple(x) in self.members

    @property
    def members(self) -> frozenset:
        return frozenset(self.points)


@dataclass(frozen=True)
class MNatSet:
    """Finite M♮-convex set; decomposes into M-convex layers by coordinate sum."""
    ground: GroundSet
    points: Tuple[LatticePoint, ...]

    def __init__(self, ground: GroundSet, points: Iterable[Sequence[int]], verify: bool = True):
        pts = canonical_points(points, ground.size)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "points", pts)
        if verify and not check_mnat_convex(pts):
            raise UsageError(f"point set of size {len(pts)} is not M♮-convex")

    @property
    def n(self) -> int:
        return self.ground.size

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        return tuple(x) in frozenset(self.points)

    def layer_sums(self) -> List[int]:
        return sorted({sum(x) for x in self.points})

    def layers(self) -> List[MConvexSet]:
        return layers(self)

    def layer(self, k: int) -> MConvexSet:
        pts = [x for x in self.points if sum(x) == k]
        if not pts:
            raise UsageError(f"no layer at coordinate sum {k}")
        return MConvexSet(self.ground, pts, verify=False)

    def top(self) -> MConvexSet:
        return self.layer(max(self.layer_sums()))

    def bottom(self) -> MConvexSet:
        return self.layer(min(self.layer_sums()))


def layers(R: Union[MNatSet, MConvexSet]) -> List[MConvexSet]:
    """Partition by coordinate sum, ascending."""
    by_sum: Dict[int, List[LatticePoint]] = {}
    for x in R.points:
        by_sum.setdefault(sum(x), []).append(x)
    return [MConvexSet(R.ground, by_sum[k], verify=False) for k in sorted(by_sum)]


def as_mnat(P: MConvexSet) -> MNatSet:
    return MNatSet(P.ground, P.points, verify=False)


# -----------------------------
# Set functions
# -----------------------------

@dataclass(frozen=True)
class SetFunction:
    """Dense table 2^E -> values indexed by SubsetMask (bit i is element i+1)."""
    ground: GroundSet
    table: Tuple[Value, ...]

    def __init__(self, ground: GroundSet, table: Sequence[Value]):
        table = tuple(table)
        if len(table) != 1 << ground.size:
            raise UsageError(f"table has {len(table)} entries, expected {1 << ground.size}")
        for v in table:
            if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
                raise UsageError(f"table values must be integers or rationals, got {v!r}")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "table", table)

    def __call__(self, A: SubsetMask) -> Value:
        return self.table[A]

    @property
    def n(self) -> int:
        return self.ground.size

    @property
    def rank(self) -> Value:
        return self.table[self.ground.full_mask]

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) or v.denominator == 1 for v in self.table)

    def dual(self) -> "SetFunction":
        return dual(self)

    def __add__(self, other: "SetFunction") -> "SetFunction":
        if other.ground.size != self.ground.size:
            raise UsageError("cannot add set functions on different ground sets")
        return type(self)(self.ground, [a + b for a, b in zip(self.table, other.table)])


class SubmodularFn(SetFunction):
    """SetFunction with p(∅)=0 and the submodular inequality, certified on construction."""

    def __init__(self, ground: GroundSet, table: Sequence[Value], verify: bool = True):
        super().__init__(ground, table)
        if self.table[0] != 0:
            raise UsageError(f"p(∅) must be 0, got {self.table[0]}")
        if verify and not check_submodular(self.table):
            raise UsageError("table is not submodular")

    def __add__(self, other: "SetFunction") -> "SubmodularFn":
        if other.ground.size != self.ground.size:
            raise UsageError("cannot add set functions on different ground sets")
        return SubmodularFn(self.ground, [a + b for a, b in zip(self.table, other.table)], verify=False)


def check_submodular(table: Sequence[Value]) -> bool:
    """Exhaustive p(A∪B) + p(A∩B) <= p(A) + p(B) over all pairs."""
    size = len(table)
    if size == 0 or size & (size - 1):
        raise UsageError(f"table length {size} is not a power of two")
    if table[0] != 0:
        return False
    for A in range(size):
        for B in range(A + 1, size):
            if table[A | B] + table[A & B] > table[A] + table[B]:
                return False
    return True


def dual(p: SetFunction) -> SetFunction:
    """p#(A) = p(E) - p(E \\ A)."""
    full = p.ground.full_mask
    top = p.table[full]
    return SetFunction(p.ground, [top - p.table[full ^ A] for A in range(1 << p.n)])


def modular(ground: GroundSet, v: Sequence[Value]) -> SubmodularFn:
    check_width(v, ground.size, "modular vector")
    return SubmodularFn(
        ground,
        [sum((v[i] for i in mask_elements(A)), 0) for A in ground.subsets()],
        verify=False,
    )


# -----------------------------
# Correspondence
# -----------------------------

def set_to_submodular(P: MConvexSet) -> SubmodularFn:
    """p(A) = max over x in P of x(A)."""
    n = P.n
    table = [0] * (1 << n)
    for A in range(1, 1 << n):
        idx = list(mask_elements(A))
        table[A] = max(sum(x[i] for i in idx) for x in P.points)
    return SubmodularFn(P.ground, table, verify=False)


def set_to_bounds(S) -> Tuple[SubmodularFn, SetFunction]:
    """Tight (upper, lower) set functions max x(A), min x(A) of a point set."""
    pts = points_of(S)
    n = len(pts[0])
    ground = S.ground if hasattr(S, "ground") else GroundSet(n)
    upper = [0] * (1 << n)
    lower = [0] * (1 << n)
    for A in range(1, 1 << n):
        idx = list(mask_elements(A))
        sums = [sum(x[i] for i in idx) for x in pts]
        upper[A] = max(sums)
        lower[A] = min(sums)
    return SubmodularFn(ground, upper, verify=False), SetFunction(ground, lower)


def enumerate_polytope(upper: Sequence[Value], lower: Sequence[Value], n: int) -> List[LatticePoint]:
    """
    All integer x with lower(A) <= x(A) <= upper(A) for every nonempty A.

    Coordinates are fixed left to right; after fixing coordinate k every mask
    whose highest element is k is fully determined and checked, so infeasible
    prefixes are cut immediately.
    """
    sums: List[Value] = [0] * (1 << n)
    x = [0] * n
    out: List[LatticePoint] = []

    def rec(k: int) -> None:
        if k == n:
            out.append(tuple(x))
            return
        bit = 1 << k
        for v in range(math.ceil(lower[bit]), math.floor(upper[bit]) + 1):
            x[k] = v
            ok = True
            for A in range(bit, bit << 1):
                s = sums[A ^ bit] + v
                if s > upper[A] or s < lower[A]:
                    ok = False
                    break
                sums[A] = s
            if ok:
                rec(k + 1)

    rec(0)
    return out


def submodular_to_set(p: SubmodularFn) -> MConvexSet:
    """B(p) ∩ Z^E, searched inside the box [p#({i}), p({i})]."""
    if not p.is_integral:
        raise UsageError("submodular_to_set needs an integer-valued table")
    pts = enumerate_polytope(p.table, dual(p).table, p.n)
    logger.debug("base polytope enumeration: n=%d, %d points", p.n, len(pts))
    if not pts:
        raise UsageError("base polytope has no lattice points; is the table submodular?")
    return MConvexSet(p.ground, pts, verify=False)


# -----------------------------
# Greedy vertices
# -----------------------------

def check_order(order: Sequence[int], n: int) -> Tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise UsageError(f"order must be a permutation of the {n} elements, got {[o + 1 for o in order]}")
    return order


def greedy_vertex(p: SetFunction, order: Sequence[int]) -> Tuple[Value, ...]:
    """
    x_{o_k} = p({o_1..o_k}) - p({o_1..o_{k-1}}); the first element of `order`
    is maximized first. `order` is 0-indexed.
    """
    order = check_order(order, p.n)
    x: List[Value] = [0] * p.n
    prefix = 0
    for o in order:
        nxt = prefix | (1 << o)
        x[o] = p.table[nxt] - p.table[prefix]
        prefix = nxt
    return tuple(x)


def vertex_set(p: SetFunction, caps: Optional[Caps] = None) -> List[Tuple[Value, ...]]:
    caps = caps or DEFAULT_CAPS
    if p.n > caps.vertex_sweep_n:
        raise CapExceeded("vertex_sweep_n", p.n, caps.vertex_sweep_n)
    verts = {greedy_vertex(p, order) for order in itertools.permutations(range(p.n))}
    return sorted(verts)

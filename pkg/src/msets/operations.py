from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from src.lattice.core import (
    LatticePoint,
    SubsetMask,
    add,
    bounding_box,
    check_mask,
    check_width,
    mask_elements,
    step,
)
from src.lattice.errors import Disagreement, EmptyResult, UsageError
from src.msets.mconvex import (
    MConvexSet,
    MNatSet,
    SetFunction,
    SubmodularFn,
    enumerate_polytope,
    set_to_bounds,
    set_to_submodular,
    submodular_to_set,
)

logger = logging.getLogger(__name__)

AnySet = Union[MConvexSet, MNatSet]


def _expand(sub_mask: SubsetMask, idx: Sequence[int]) -> SubsetMask:
    """Mask over the coordinates `idx` -> mask over the full ground set."""
    out = 0
    for pos, i in enumerate(idx):
        if sub_mask >> pos & 1:
            out |= 1 << i
    return out


def _complement(P: AnySet, V: SubsetMask) -> Tuple[List[int], SubsetMask]:
    check_mask(V, P.n)
    if V == 0:
        raise UsageError("subset V must be nonempty")
    return list(mask_elements(V)), P.ground.full_mask ^ V


# -----------------------------
# Restriction, projection, sums
# -----------------------------

def restrict(P: MConvexSet, V: SubsetMask) -> MConvexSet:
    """{x|_V : (x, 0) in P}."""
    idx, U = _complement(P, V)
    out = [tuple(x[i] for i in idx) for x in P.points if all(x[j] == 0 for j in mask_elements(U))]
    if not out:
        raise EmptyResult(f"no point of P vanishes on {P.ground.format_mask(U)}")
    return MConvexSet(P.ground.restrict(V), out, verify=False)


def project(P: AnySet, V: SubsetMask, verify: bool = False) -> MNatSet:
    idx, _ = _complement(P, V)
    return MNatSet(P.ground.restrict(V), [tuple(x[i] for i in idx) for x in P.points], verify=verify)


def minkowski_sum(P: MConvexSet, Q: MConvexSet, verify: bool = False) -> MConvexSet:
    if P.n != Q.n:
        raise UsageError(f"Minkowski sum of sets on {P.n} and {Q.n} elements")
    S = MConvexSet(P.ground, {add(x, y) for x in P.points for y in Q.points}, verify=False)
    if verify and set_to_submodular(S) != set_to_submodular(P) + set_to_submodular(Q):
        raise Disagreement("submodular function of P+Q is not p+q")
    return S


def translate(P: MConvexSet, v: Sequence[int]) -> MConvexSet:
    check_width(v, P.n, "translation vector")
    return MConvexSet(P.ground, [add(x, tuple(v)) for x in P.points], verify=False)


# -----------------------------
# Truncation / elongation
# -----------------------------

def truncation_table(p: SetFunction, k: int = 1) -> SubmodularFn:
    """p^tr: p(E) lowered by k, everything else unchanged."""
    if k < 1:
        raise UsageError(f"truncation depth must be >= 1, got {k}")
    table = list(p.table)
    table[p.ground.full_mask] -= k
    return SubmodularFn(p.ground, table, verify=False)


def elongation_table(p: SetFunction, k: int = 1) -> SubmodularFn:
    """Dual of truncation: p^#(E) + k, i.e. p(A) + k on every nonempty A."""
    if k < 1:
        raise UsageError(f"elongation depth must be >= 1, got {k}")
    return SubmodularFn(p.ground, [0] + [v + k for v in p.table[1:]], verify=False)


def _shift_points(points, n: int, down: bool) -> set:
    if down:
        return {step(x, minus=i) for x in points for i in range(n)}
    return {step(x, plus=i) for x in points for i in range(n)}


def truncate(P: MConvexSet, k: int = 1, verify: bool = False) -> MConvexSet:
    """(P + Z^E_{<=0}) ∩ H_{r-k}, via the truncated submodular function."""
    out = submodular_to_set(truncation_table(set_to_submodular(P), k))
    if verify:
        pts = set(P.points)
        for _ in range(k):
            pts = _shift_points(pts, P.n, down=True)
        if set(out.points) != pts:
            raise Disagreement("truncation formula and point-level truncation differ")
    return out


def elongate(P: MConvexSet, k: int = 1, verify: bool = False) -> MConvexSet:
    out = submodular_to_set(elongation_table(set_to_submodular(P), k))
    if verify:
        pts = set(P.points)
        for _ in range(k):
            pts = _shift_points(pts, P.n, down=False)
        if set(out.points) != pts:
            raise Disagreement("elongation formula and point-level elongation differ")
    return out


# -----------------------------
# Box and plank intersections
# -----------------------------

@dataclass(frozen=True)
class GpolyIntersection:
    """Filtered points of R together with the (upper, lower) tables describing them."""
    points: MNatSet
    upper: SetFunction
    lower: SetFunction


def _checked_intersection(R: AnySet, kept: List[LatticePoint], upper, lower, what: str) -> GpolyIntersection:
    if not kept:
        raise EmptyResult(f"{what} does not meet the set")
    n = R.n
    enumerated = enumerate_polytope(upper, lower, n)
    if sorted(enumerated) != sorted(kept):
        raise Disagreement(f"{what}: transformed tables describe {len(enumerated)} points, filter kept {len(kept)}")
    return GpolyIntersection(
        points=MNatSet(R.ground, kept, verify=False),
        upper=SetFunction(R.ground, upper),
        lower=SetFunction(R.ground, lower),
    )


def intersect_box(R: AnySet, a: Sequence[int], b: Sequence[int]) -> GpolyIntersection:
    """
    R ∩ [a, b] for R = G(p, q) with p submodular, q supermodular:

        p'(Z) = min_X  p(X) - a(X - Z) + b(Z - X)
        q'(Z) = max_X  q(X) - b(X - Z) + a(Z - X)
    """
    n = R.n
    check_width(a, n, "box lower corner")
    check_width(b, n, "box upper corner")
    if any(lo > hi for lo, hi in zip(a, b)):
        raise UsageError(f"box corners must satisfy a <= b, got a={list(a)}, b={list(b)}")
    p, q = set_to_bounds(R)
    full = R.ground.full_mask

    def msum(v, mask):
        return sum(v[i] for i in mask_elements(mask))

    upper = [0] * (1 << n)
    lower = [0] * (1 << n)
    for Z in range(1 << n):
        upper[Z] = min(p.table[X] - msum(a, X & ~Z & full) + msum(b, Z & ~X & full) for X in range(1 << n))
        lower[Z] = max(q.table[X] - msum(b, X & ~Z & full) + msum(a, Z & ~X & full) for X in range(1 << n))
    kept = [x for x in R.points if all(lo <= c <= hi for lo, c, hi in zip(a, x, b))]
    return _checked_intersection(R, kept, upper, lower, "box")


def intersect_plank(R: AnySet, alpha: int, beta: int) -> GpolyIntersection:
    """
    R ∩ {alpha <= x(E) <= beta}:

        p~(Z) = min(p(Z), beta - q(E - Z))
        q~(Z) = max(q(Z), alpha - p(E - Z))
    """
    if alpha > beta:
        raise UsageError(f"plank bounds must satisfy alpha <= beta, got {alpha} > {beta}")
    p, q = set_to_bounds(R)
    full = R.ground.full_mask
    upper = [min(p.table[Z], beta - q.table[full ^ Z]) for Z in range(1 << R.n)]
    lower = [max(q.table[Z], alpha - p.table[full ^ Z]) for Z in range(1 << R.n)]
    kept = [x for x in R.points if alpha <= sum(x) <= beta]
    return _checked_intersection(R, kept, upper, lower, "plank")


def polymatroid_truncate(P: MConvexSet, k: int = 1) -> MConvexSet:
    """Truncation kept inside the nonnegative orthant (box with a = 0)."""
    T = truncate(P, k)
    _, hi = bounding_box(T.points)
    if any(c < 0 for c in hi):
        raise EmptyResult("truncation has no point in the nonnegative orthant")
    res = intersect_box(T, [0] * P.n, hi)
    return MConvexSet(P.ground, res.points.points, verify=False)


# -----------------------------
# Minors
# -----------------------------

def deletion_table(p: SetFunction, U: SubsetMask) -> SubmodularFn:
    """p_{\\U}(A) = p(A) for A ⊆ E \\ U."""
    idx = list(mask_elements(p.ground.full_mask ^ U))
    return SubmodularFn(p.ground.restrict(p.ground.full_mask ^ U),
                        [p.table[_expand(A, idx)] for A in range(1 << len(idx))], verify=False)


def contraction_table(p: SetFunction, U: SubsetMask) -> SubmodularFn:
    """p_{/U}(A) = p(A ∪ U) - p(U)."""
    idx = list(mask_elements(p.ground.full_mask ^ U))
    return SubmodularFn(p.ground.restrict(p.ground.full_mask ^ U),
                        [p.table[_expand(A, idx) | U] - p.table[U] for A in range(1 << len(idx))], verify=False)


def minor_table(p: SetFunction, U: SubsetMask, k) -> SubmodularFn:
    """p^U_k(A) = min(p(A), k + p(A ∪ U) - p(E)) for A ⊆ V = E \\ U."""
    full = p.ground.full_mask
    idx = list(mask_elements(full ^ U))
    table = []
    for A in range(1 << len(idx)):
        X = _expand(A, idx)
        table.append(min(p.table[X], k + p.table[X | U] - p.table[full]) if A else 0)
    return SubmodularFn(p.ground.restrict(full ^ U), table, verify=False)


def minor_range(P: MConvexSet, U: SubsetMask) -> Tuple[int, int]:
    """Coordinate-sum range of the projection onto E \\ U, i.e. [p(E) - p(U), p(V)]."""
    V = P.ground.full_mask ^ U
    if V == 0:
        raise UsageError("minor needs U to be a proper subset")
    sums = [sum(x[i] for i in mask_elements(V)) for x in P.points]
    return min(sums), max(sums)


def basic_minor(P: MConvexSet, U: SubsetMask, k: int, verify: bool = False) -> MConvexSet:
    """
    P^U_k built from its table min(p(A), k + p(A ∪ U) - p(E)) on V = E \\ U.
    With verify, it is compared with the sum-k layer of the projection onto V.
    """
    check_mask(U, P.n)
    lo, hi = minor_range(P, U)
    if not lo <= k <= hi:
        raise UsageError(f"minor index k={k} outside range [{lo}, {hi}]")
    out = submodular_to_set(minor_table(set_to_submodular(P), U, k))
    if verify:
        layer = project(P, P.ground.full_mask ^ U).layer(k)
        if out.points != layer.points:
            raise Disagreement(f"minor formula and projected layer differ at k={k}")
    return out


def deletion(P: MConvexSet, U: SubsetMask, verify: bool = False) -> MConvexSet:
    """Top layer of the projection onto E \\ U."""
    check_mask(U, P.n)
    _, hi = minor_range(P, U)
    out = basic_minor(P, U, hi)
    if verify and set_to_submodular(out).table != deletion_table(set_to_submodular(P), U).table:
        raise Disagreement("deletion table mismatch")
    return out


def contraction(P: MConvexSet, U: SubsetMask, verify: bool = False) -> MConvexSet:
    """Bottom layer of the projection onto E \\ U."""
    check_mask(U, P.n)
    lo, _ = minor_range(P, U)
    out = basic_minor(P, U, lo)
    if verify and set_to_submodular(out).table != contraction_table(set_to_submodular(P), U).table:
        raise Disagreement("contraction table mismatch")
    return out


def minor_flag(P: MConvexSet, U: SubsetMask) -> List[MConvexSet]:
    """All basic minors P^U_k, ascending in k."""
    lo, hi = minor_range(P, U)
    return [basic_minor(P, U, k) for k in range(lo, hi + 1)]

from __future__ import annotations

import logging
from typing import List, Sequence

from src.lattice.errors import UsageError
from src.msets.mconvex import MConvexSet, MNatSet, check_mnat_convex, layers, set_to_submodular
from src.quotient.characterizations import check_compliant, gpoly_points

logger = logging.getLogger(__name__)


def _check_nonempty(sets: Sequence[MConvexSet]) -> None:
    if not sets:
        raise UsageError("a flag needs at least one set")
    n = sets[0].n
    if any(S.n != n for S in sets):
        raise UsageError("all sets of a flag must live on the same ground set")


def check_flag(sets: Sequence[MConvexSet]) -> bool:
    """sets[i] ↠ sets[i-1] for every i (lowest rank first)."""
    _check_nonempty(sets)
    tables = [set_to_submodular(S) for S in sets]
    return all(check_compliant(tables[i], tables[i - 1]) for i in range(1, len(tables)))


def is_consecutive(sets: Sequence[MConvexSet]) -> bool:
    return all(sets[i].rank == sets[i - 1].rank + 1 for i in range(1, len(sets)))


def complete_flag(sets: Sequence[MConvexSet]) -> List[MConvexSet]:
    """Fill every rank gap with the middle layers of G(p_i, p_{i-1}^#)."""
    _check_nonempty(sets)
    if not check_flag(sets):
        raise UsageError("input is not a flag")
    out: List[MConvexSet] = [sets[0]]
    for lower, upper in zip(sets, sets[1:]):
        if upper.rank - lower.rank > 1:
            R = gpoly_points(set_to_submodular(upper), set_to_submodular(lower))
            middle = [L for L in layers(R) if lower.rank < L.rank < upper.rank]
            logger.debug("filled ranks %d..%d with %d layers", lower.rank, upper.rank, len(middle))
            out.extend(MConvexSet(upper.ground, L.points, verify=False) for L in middle)
        out.append(upper)
    return out


def mnat_completion(flag: Sequence[MConvexSet]) -> List[MConvexSet]:
    """Layers of G(p_top, p_bottom^#); each one contains the matching input set."""
    _check_nonempty(flag)
    if not is_consecutive(flag):
        raise UsageError("mnat_completion needs a consecutive flag")
    if not check_flag(flag):
        raise UsageError("input is not a flag")
    top, bottom = flag[-1], flag[0]
    R = gpoly_points(set_to_submodular(top), set_to_submodular(bottom))
    out = [MConvexSet(top.ground, R.layer(S.rank).points, verify=False) for S in flag]
    for S, T in zip(flag, out):
        if not set(S.points) <= set(T.points):
            raise UsageError(f"layer at rank {S.rank} does not contain the input set")
    return out


def union(sets: Sequence[MConvexSet]) -> MNatSet:
    _check_nonempty(sets)
    return MNatSet(sets[0].ground, {x for S in sets for x in S.points}, verify=False)


def is_mnat_flag(sets: Sequence[MConvexSet]) -> bool:
    """The union is M♮-convex and its layers are exactly the given sets."""
    U = union(sets)
    if not check_mnat_convex(U):
        return False
    return [L.points for L in U.layers()] == [S.points for S in sorted(sets, key=lambda S: S.rank)]

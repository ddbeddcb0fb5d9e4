from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.config.caps import Caps
from src.functions.atlas import minimizer_atlas
from src.functions.mfunc import (
    MFunc,
    MNatFunc,
    check_m_convex_fn,
    check_mnat_fn,
    induce_fn,
    left_function,
    minimizer,
    union_of_graphs,
)
from src.lattice.core import INF, GroundSet, LatticePoint, ext_le, mask_elements, step, supp_plus
from src.lattice.errors import Disagreement, EmptyResult, UsageError
from src.msets.mconvex import check_m_convex, check_mnat_convex
from src.quotient.characterizations import check_exchange
from src.quotient.suite import Skipped, Verdict

logger = logging.getLogger(__name__)


def _same_ground(f: MFunc, g: MFunc) -> None:
    if f.n != g.n:
        raise UsageError(f"functions live on {f.n} and {g.n} elements")


def rank_gap(f: MFunc, g: MFunc) -> int:
    _same_ground(f, g)
    return f.rank - g.rank


# -----------------------------
# A: union of graphs
# -----------------------------

def quotient_A(f: MFunc, g: MFunc) -> Verdict:
    """Elementary quotients only: the union of the two graphs is M♮-convex."""
    gap = rank_gap(f, g)
    if gap != 1:
        return Skipped(f"rank gap {gap} != 1; use flag_constants on a full chain")
    return check_mnat_fn(union_of_graphs([g, f]))


# -----------------------------
# B: valuated induction
# -----------------------------

@dataclass(frozen=True)
class ValuatedInduction:
    """gamma on E ⊔ {e} and the one-point function r on {e}; gamma's last coordinate is the right side."""
    gamma: MFunc
    r: MFunc

    @property
    def left_size(self) -> int:
        return self.gamma.n - 1


def valuated_induction_witness(f: MFunc, g: MFunc) -> ValuatedInduction:
    """
    gamma(x, rank(f) - x(E)) = h(x) for h the union of the graphs of f and g,
    r = 0 at the single point rank(g) - rank(f).
    """
    _same_ground(f, g)
    h = union_of_graphs([g, f])
    top = f.rank
    gamma = MFunc(f.ground.extended(), [(x + (top - sum(x),), v) for x, v in h.values], verify=False)
    r = MFunc(GroundSet(1), [((g.rank - f.rank,), 0)], verify=False)
    return ValuatedInduction(gamma, r)


def verify_valuated_induction(witness: ValuatedInduction, f: MFunc, g: MFunc) -> bool:
    """gamma is M-convex, the top layer of its left function is f, and inducing r through gamma gives g."""
    if not check_m_convex_fn(witness.gamma):
        return False
    left = left_function(witness.gamma, witness.left_size)
    if left.top().as_dict() != f.as_dict():
        return False
    try:
        induced = induce_fn(witness.r, witness.gamma, witness.left_size)
    except EmptyResult:
        return False
    return induced.as_dict() == g.as_dict()


def quotient_B(
    f: MFunc, g: MFunc, witness: Optional[ValuatedInduction] = None
) -> Tuple[Verdict, Optional[ValuatedInduction]]:
    if witness is None:
        gap = rank_gap(f, g)
        if gap != 1:
            return Skipped(f"rank gap {gap} != 1 and no witness supplied"), None
        witness = valuated_induction_witness(f, g)
    return verify_valuated_induction(witness, f, g), witness


# -----------------------------
# C: exchange inequality
# -----------------------------

def quotient_C(f: MFunc, g: MFunc) -> bool:
    """
    For x in dom f, y in dom g and i in supp+(y - x) some j in supp-(y - x) has
    f(x) + g(y) >= f(x + e_i - e_j) + g(y - e_i + e_j).
    """
    _same_ground(f, g)
    for x, fx in f.values:
        for y, gy in g.values:
            minus = list(mask_elements(supp_plus(x, y)))
            for i in mask_elements(supp_plus(y, x)):
                ok = False
                for j in minus:
                    a = f(step(x, plus=i, minus=j))
                    b = g(step(y, plus=j, minus=i))
                    if a is not INF and b is not INF and ext_le(a + b, fx + gy):
                        ok = True
                        break
                if not ok:
                    return False
    return True


# -----------------------------
# D: minimizer quotients
# -----------------------------

def quotient_D(f: MFunc, g: MFunc, caps: Optional[Caps] = None) -> bool:
    """f^u ↠ g^u for every functional u, read off the minimizer atlas."""
    _same_ground(f, g)
    for cell in minimizer_atlas(f, g, caps):
        if not check_exchange(cell.fcell, cell.gcell):
            logger.debug("minimizer quotient fails at u=%s", [str(c) for c in cell.u])
            return False
    return True


# -----------------------------
# Flags of functions
# -----------------------------

def _check_chain(chain: Sequence[MFunc]) -> None:
    if len(chain) < 2:
        raise UsageError("a chain needs at least two functions")
    for low, high in zip(chain, chain[1:]):
        _same_ground(low, high)
        if high.rank != low.rank + 1:
            raise UsageError(f"ranks must be consecutive, got {low.rank} then {high.rank}")
        if not quotient_C(high, low):
            raise UsageError(f"ranks {high.rank} and {low.rank} fail the exchange inequality")
    pts = [x for f in chain for x in f.domain]
    if not check_mnat_convex(pts):
        raise UsageError("union of the chain's domains is not M♮-convex")


def flag_constants(chain: Sequence[MFunc]) -> Tuple[Tuple[Fraction, ...], MNatFunc]:
    """
    Shifts c_0..c_k, lowest rank first, making h = min_i (f_i - c_i) M♮-convex.

    c_0 = c_1 = 0 and c_m is the minimum over 0 <= l <= m-2, y in dom f_l,
    x in dom f_m and j with x_j > y_j of

        f_m(x) - f_{m-1}(x - e_j) + c_{m-1} - f_{l+1}(y + e_j) + c_{l+1} + f_l(y) - c_l
    """
    _check_chain(chain)
    k = len(chain) - 1
    c: List[Fraction] = [Fraction(0)] * (k + 1)
    for m in range(2, k + 1):
        best: Optional[Fraction] = None
        for l in range(m - 1):
            for y, fy in chain[l].values:
                for x, fx in chain[m].values:
                    for j in mask_elements(supp_plus(x, y)):
                        a = chain[m - 1](step(x, minus=j))
                        b = chain[l + 1](step(y, plus=j))
                        if a is INF or b is INF:
                            continue
                        val = fx - a + c[m - 1] - b + c[l + 1] + fy - c[l]
                        if best is None or val < best:
                            best = val
        if best is None:
            raise UsageError(f"no exchange candidates for the rank {chain[m].rank} constant")
        c[m] = best
    h = union_of_graphs([
        MFunc(f.ground, [(x, v - ci) for x, v in f.values], verify=False) for f, ci in zip(chain, c)
    ])
    if not check_mnat_fn(h):
        raise Disagreement("shifted chain is not M♮-convex")
    return tuple(c), h


# -----------------------------
# Sparse paving
# -----------------------------

def hypersimplex(n: int, k: int) -> List[LatticePoint]:
    out = []
    for combo in itertools.combinations(range(n), k):
        x = [0] * n
        for i in combo:
            x[i] = 1
        out.append(tuple(x))
    return out


def is_sparse_paving(f: MFunc) -> bool:
    """
    dom f is the full 0/1 layer of its rank, argmin f is a matroid, and the
    non-minimizing points pairwise share at most rank - 2 coordinates.
    """
    k = f.rank
    if sorted(f.domain) != sorted(hypersimplex(f.n, k)):
        return False
    low = minimizer(f)
    if not check_m_convex(low.points):
        return False
    basis = low.members
    others = [x for x in f.domain if x not in basis]
    for x, y in itertools.combinations(others, 2):
        if sum(min(a, b) for a, b in zip(x, y)) > k - 2:
            return False
    return True


def sparse_paving_quotient(f: MFunc, g: MFunc, caps: Optional[Caps] = None) -> MNatFunc:
    """
    f on the top 0/1 layer, g on the bottom one, and the constant
    min(min f, min g) on every 0/1 layer in between.
    """
    _same_ground(f, g)
    if rank_gap(f, g) < 1:
        raise UsageError(f"rank of f ({f.rank}) must exceed rank of g ({g.rank})")
    for name, fn in (("f", f), ("g", g)):
        if not is_sparse_paving(fn):
            raise UsageError(f"{name} is not a sparse paving valuated matroid")
    if not quotient_D(f, g, caps):
        raise UsageError("g is not a minimizer quotient of f")
    middle = min(f.min_value, g.min_value)
    values: Dict[LatticePoint, Fraction] = dict(g.values)
    for k in range(g.rank + 1, f.rank):
        values.update((x, middle) for x in hypersimplex(f.n, k))
    values.update(f.values)
    h = MNatFunc(f.ground, values, verify=False)
    if not check_mnat_fn(h):
        raise Disagreement("sparse paving construction is not M♮-convex")
    return h

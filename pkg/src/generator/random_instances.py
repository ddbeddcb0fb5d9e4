"""
Seeded random instances. Every generator is a pure function of its seed and
parameters and certifies what it returns.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.config.caps import DEFAULT_CAPS, Caps
from src.functions.mfunc import MFunc, check_m_convex_fn, truncation_fn
from src.functions.quotients import hypersimplex, is_sparse_paving, quotient_D
from src.lattice.core import GroundSet, bounding_box, popcount
from src.lattice.errors import CapExceeded, Disagreement, UsageError
from src.msets.mconvex import MConvexSet, SubmodularFn, check_submodular, submodular_to_set
from src.linking.bipartite import bipartite_graph
from src.msets.operations import contraction_table, deletion_table, translate
from src.quotient.characterizations import check_compliant

logger = logging.getLogger(__name__)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def child_seeds(seed: int, count: int) -> List[int]:
    """Independent per-instance seeds for a batch."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(int(seed)).spawn(count)]


def _check_size(n: int, scale: int) -> None:
    if n < 1:
        raise UsageError(f"n must be positive, got {n}")
    if scale < 0:
        raise UsageError(f"scale must be nonnegative, got {scale}")


# -----------------------------
# Set functions and sets
# -----------------------------

def gen_submodular(seed: int, n: int, scale: int = 2) -> SubmodularFn:
    """
    Sum of a modular vector with entries in [-scale, scale] and one to three
    budget functions A -> min(a |A ∩ S|, b). Budgets with a = 1 are rank
    functions of uniform matroids; sums of those on disjoint S are partition
    matroid ranks.
    """
    _check_size(n, scale)
    rng = rng_for(seed)
    full = (1 << n) - 1
    weights = [int(w) for w in rng.integers(-scale, scale + 1, size=n)]
    table = [sum(w for i, w in enumerate(weights) if A >> i & 1) for A in range(1 << n)]
    for _ in range(int(rng.integers(1, 4))):
        S = int(rng.integers(1, full + 1))
        a = int(rng.integers(0, scale + 1))
        b = int(rng.integers(0, scale * popcount(S) + 1))
        for A in range(1 << n):
            table[A] += min(a * popcount(A & S), b)
    if not check_submodular(table):
        raise Disagreement("generated table is not submodular")
    return SubmodularFn(GroundSet(n), table, verify=False)


def gen_m_set(seed: int, n: int, scale: int = 2) -> MConvexSet:
    return submodular_to_set(gen_submodular(seed, n, scale))


def gen_nonneg_m_set(seed: int, n: int, scale: int = 2) -> MConvexSet:
    """gen_m_set translated so that its lowest corner is the origin."""
    P = gen_m_set(seed, n, scale)
    lo, _ = bounding_box(P.points)
    return translate(P, [-c for c in lo])


def gen_bipartite(seed: int, left: int, right: int, density: float = 0.5) -> nx.Graph:
    """Each of the left x right edges kept independently with probability `density`."""
    if not 0 <= density <= 1:
        raise UsageError(f"density must lie in [0, 1], got {density}")
    rng = rng_for(seed)
    keep = rng.random(size=(left, right)) < density
    return bipartite_graph(left, right, [(i, j) for i in range(left) for j in range(right) if keep[i, j]])


def gen_quotient_pair(seed: int, n: int, scale: int = 2) -> Tuple[SubmodularFn, SubmodularFn]:
    """Deletion and contraction of the extra element of a random r on E ⊔ {e}."""
    r = gen_submodular(seed, n + 1, scale)
    extra = 1 << n
    p, q = deletion_table(r, extra), contraction_table(r, extra)
    if not check_compliant(p, q):
        raise Disagreement("deletion and contraction are not compliant")
    return p, q


def gen_quotient_triple(
    seed: int, n: int, scale: int = 2
) -> Tuple[SubmodularFn, SubmodularFn, SubmodularFn]:
    """
    p ↠ q ↠ r from a random table on E ⊔ {e1, e2}: delete both extras,
    contract e1 and delete e2, contract both.
    """
    t = gen_submodular(seed, n + 2, scale)
    e1, e2 = 1 << n, 1 << (n + 1)
    p = deletion_table(t, e1 | e2)
    q = deletion_table(contraction_table(t, e1), e1)
    r = contraction_table(t, e1 | e2)
    if not (check_compliant(p, q) and check_compliant(q, r)):
        raise Disagreement("minor chain is not compliant")
    return p, q, r


def gen_non_quotient_pair(
    seed: int, n: int, scale: int = 2, caps: Optional[Caps] = None
) -> Tuple[SubmodularFn, SubmodularFn]:
    """Independent draws with rank(p) > rank(q), rejected until they are not compliant."""
    caps = caps or DEFAULT_CAPS
    scale = max(scale, 1)
    for draw, s in enumerate(child_seeds(seed, caps.rejection_draws)):
        a, b = child_seeds(s, 2)
        p, q = gen_submodular(a, n, scale), gen_submodular(b, n, scale)
        if p.rank > q.rank and not check_compliant(p, q):
            logger.debug("non-quotient pair after %d draws", draw + 1)
            return p, q
    raise CapExceeded("rejection_draws", caps.rejection_draws, caps.rejection_draws)


# -----------------------------
# Functions
# -----------------------------

def _convex_slopes(rng: np.random.Generator, count: int, curvature: int) -> List[Fraction]:
    """Nondecreasing rational slopes; curvature 0 gives all zeros."""
    if curvature == 0:
        return [Fraction(0)] * count
    nums = rng.integers(-curvature, curvature + 1, size=count)
    dens = rng.integers(1, 4, size=count)
    return sorted(Fraction(int(a), int(d)) for a, d in zip(nums, dens))


def gen_m_func(seed: int, P: MConvexSet, curvature: int = 2) -> MFunc:
    """f(x) = sum_i phi_i(x_i) on P, each phi_i convex piecewise linear."""
    if curvature < 0:
        raise UsageError(f"curvature must be nonnegative, got {curvature}")
    rng = rng_for(seed)
    lo, hi = bounding_box(P.points)
    tables = []
    for a, b in zip(lo, hi):
        slopes = _convex_slopes(rng, b - a, curvature)
        vals = [Fraction(0)]
        for s in slopes:
            vals.append(vals[-1] + s)
        tables.append(vals)
    values = [(x, sum((tables[i][c - lo[i]] for i, c in enumerate(x)), Fraction(0))) for x in P.points]
    f = MFunc(P.ground, values, verify=False)
    if not check_m_convex_fn(f):
        raise Disagreement("separable convex function failed the exchange inequality")
    return f


def perturb_m_func(seed: int, n: int, scale: int = 1, curvature: int = 2) -> MFunc:
    """
    gen_m_func on a random set, then (each with probability 1/2) one value
    raised and one point dropped. The result is deliberately not certified.
    """
    rng = rng_for(seed)
    s1, s2 = (int(s) for s in rng.integers(0, 2**31, size=2))
    values = dict(gen_m_func(s2, gen_m_set(s1, n, scale), curvature).values)
    pts = sorted(values)
    if rng.random() < 0.5:
        x = pts[int(rng.integers(0, len(pts)))]
        values[x] += Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    if len(pts) > 1 and rng.random() < 0.5:
        del values[pts[int(rng.integers(0, len(pts)))]]
    return MFunc(GroundSet(n), values, verify=False)


def _shift(f: MFunc, w: Sequence[int], c: int) -> MFunc:
    """f + <w, .> + c."""
    return MFunc(f.ground, [(x, v + sum(a * b for a, b in zip(w, x)) + c) for x, v in f.values], verify=False)


def gen_function_chain(seed: int, n: int, scale: int = 1, length: int = 3, curvature: int = 2) -> List[MFunc]:
    """
    f_top on a random M-convex set, then repeated valuated truncation, each
    layer shifted by a common linear term and its own constant. Lowest rank first.
    """
    if length < 1:
        raise UsageError(f"chain length must be positive, got {length}")
    rng = rng_for(seed)
    s1, s2 = (int(s) for s in rng.integers(0, 2**31, size=2))
    top = gen_m_func(s2, gen_m_set(s1, n, scale), curvature)
    w = [int(a) for a in rng.integers(-1, 2, size=n)]
    chain = [top]
    for _ in range(length - 1):
        chain.append(truncation_fn(chain[-1]))
    consts = [int(c) for c in rng.integers(-2, 3, size=length)]
    return [_shift(f, w, c) for f, c in zip(reversed(chain), consts)]


def gen_function_pair(
    seed: int, n: int, scale: int = 1, gap: int = 1, curvature: int = 2
) -> Tuple[MFunc, MFunc]:
    """
    (f, g) with rank(f) = rank(g) + gap. Half the draws take g from the
    valuated truncation of f (a quotient); the rest put an independent
    separable function on the truncated domain.
    """
    if gap < 1:
        raise UsageError(f"rank gap must be positive, got {gap}")
    rng = rng_for(seed)
    s1, s2, s3 = (int(s) for s in rng.integers(0, 2**31, size=3))
    f = gen_m_func(s2, gen_m_set(s1, n, scale), curvature)
    g = f
    for _ in range(gap):
        g = truncation_fn(g)
    if rng.random() < 0.5:
        g = gen_m_func(s3, g.dom_set(), curvature)
    return f, g


# -----------------------------
# Sparse paving
# -----------------------------

def gen_sparse_paving(seed: int, n: int, rank: int, base: int = 0, spread: int = 3) -> MFunc:
    """
    Constant `base` on the bases of a random sparse paving matroid and
    base + (1..spread) on its non-bases, over the whole 0/1 layer.
    """
    if not 0 < rank < n:
        raise UsageError(f"rank must lie strictly between 0 and {n}, got {rank}")
    rng = rng_for(seed)
    layer = hypersimplex(n, rank)
    order = [layer[int(i)] for i in rng.permutation(len(layer))]
    target = int(rng.integers(0, len(layer)))
    chosen: List[tuple] = []
    for x in order:
        if len(chosen) >= target or len(chosen) == len(layer) - 1:
            break
        if all(sum(min(a, b) for a, b in zip(x, y)) <= rank - 2 for y in chosen):
            chosen.append(x)
    raised = set(chosen)
    values = [(x, base + int(rng.integers(1, spread + 1)) if x in raised else base) for x in layer]
    f = MFunc(GroundSet(n), values, verify=False)
    if not is_sparse_paving(f):
        raise Disagreement("generated function is not sparse paving")
    return f


def gen_sparse_paving_pair(
    seed: int, n: int = 4, ranks: Tuple[int, int] = (2, 1), caps: Optional[Caps] = None
) -> Tuple[MFunc, MFunc]:
    """Sparse paving (f, g) of the given ranks, rejected until g is a minimizer quotient of f."""
    caps = caps or DEFAULT_CAPS
    high, low = ranks
    if high <= low:
        raise UsageError(f"ranks must be decreasing, got {list(ranks)}")
    for s in child_seeds(seed, caps.rejection_draws):
        rng = rng_for(s)
        a, b = (int(t) for t in rng.integers(0, 2**31, size=2))
        base_f, base_g = (int(t) for t in rng.integers(-2, 3, size=2))
        f = gen_sparse_paving(a, n, high, base_f)
        g = gen_sparse_paving(b, n, low, base_g)
        if quotient_D(f, g, caps):
            return f, g
    raise CapExceeded("rejection_draws", caps.rejection_draws, caps.rejection_draws)

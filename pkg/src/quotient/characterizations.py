"""
Independent deciders for P ↠ Q. Each function decides the relation through
a different object (tables, greedy vertices, contractions, the sandwiched
M♮ set, a lifted submodular function, exchange, linking sets, lifts), so
agreement between them is a meaningful check.
"""
from __future__ import annotations

import itertools
import logging
from typing import Optional, Sequence, Tuple

from src.config.caps import Caps, DEFAULT_CAPS
from src.lattice.core import GroundSet, LatticePoint, mask_elements, step, supp_plus
from src.lattice.errors import CapExceeded, EmptyResult, NoWitness, UsageError
from src.linking.linking_sets import LinkingSet, induce, left_set, product
from src.lift.lifts import LiftCertificate, compatible_lifts
from src.msets.mconvex import (
    MConvexSet,
    MNatSet,
    SetFunction,
    SubmodularFn,
    check_m_convex,
    check_mnat_convex,
    check_submodular,
    dual,
    enumerate_polytope,
    greedy_vertex,
    set_to_submodular,
    submodular_to_set,
)
from src.msets.operations import contraction, contraction_table, deletion, project

logger = logging.getLogger(__name__)


def _same_ground(p: SetFunction, q: SetFunction) -> None:
    if p.n != q.n:
        raise UsageError(f"tables live on {p.n} and {q.n} elements")


def _supersets(X: int, full: int):
    """Every Y with X ⊆ Y ⊆ full."""
    free = full ^ X
    sub = free
    while True:
        yield X | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


# -----------------------------
# (1)-(3): tables
# -----------------------------

def check_compliant(p: SetFunction, q: SetFunction) -> bool:
    """q(Y) - q(X) <= p(Y) - p(X) for every X ⊆ Y."""
    _same_ground(p, q)
    full = p.ground.full_mask
    for X in range(1 << p.n):
        for Y in _supersets(X, full):
            if q.table[Y] - q.table[X] > p.table[Y] - p.table[X]:
                return False
    return True


def check_vertex_containment(p: SetFunction, q: SetFunction, caps: Optional[Caps] = None) -> bool:
    """greedy_vertex(p, o) >= greedy_vertex(q, o) for all n! orders."""
    _same_ground(p, q)
    caps = caps or DEFAULT_CAPS
    if p.n > caps.vertex_sweep_n:
        raise CapExceeded("vertex_sweep_n", p.n, caps.vertex_sweep_n)
    for order in itertools.permutations(range(p.n)):
        x = greedy_vertex(p, order)
        y = greedy_vertex(q, order)
        if any(a < b for a, b in zip(x, y)):
            return False
    return True


def check_contraction_containment(p: SetFunction, q: SetFunction) -> bool:
    """q_{/X} <= p_{/X} pointwise for every proper X."""
    _same_ground(p, q)
    full = p.ground.full_mask
    for X in range(full):
        pc = contraction_table(p, X).table
        qc = contraction_table(q, X).table
        if any(a > b for a, b in zip(qc, pc)):
            return False
    return True


# -----------------------------
# (4): sandwiched M♮ set
# -----------------------------

def gpoly_points(p: SetFunction, q: SetFunction) -> MNatSet:
    """G(p, q#) ∩ Z^E = {x : q#(A) <= x(A) <= p(A) for all A}."""
    _same_ground(p, q)
    pts = enumerate_polytope(p.table, dual(q).table, p.n)
    if not pts:
        raise EmptyResult("G(p, q#) has no lattice points")
    logger.debug("gpoly enumeration: %d points", len(pts))
    return MNatSet(p.ground, pts, verify=False)


def check_top_bottom(p: SubmodularFn, q: SubmodularFn, R: Optional[MNatSet] = None) -> bool:
    try:
        R = R or gpoly_points(p, q)
    except EmptyResult:
        return False
    if not check_mnat_convex(R):
        return False
    return (R.top().points == submodular_to_set(p).points
            and R.bottom().points == submodular_to_set(q).points)


# -----------------------------
# (5): one-element extension
# -----------------------------

def extension_table(p: SetFunction, q: SetFunction) -> SetFunction:
    """r(A) = p(A), r(A ∪ e) = p(E) - q(E) + q(A); e is the last coordinate."""
    _same_ground(p, q)
    n = p.n
    shift = p.rank - q.rank
    e = 1 << n
    table = list(p.table) + [0] * (1 << n)
    for A in range(1 << n):
        table[A | e] = shift + q.table[A]
    return SetFunction(p.ground.extended(), table)


def deletion_contraction_witness(p: SubmodularFn, q: SubmodularFn) -> SubmodularFn:
    if not check_compliant(p, q):
        raise NoWitness("p and q are not compliant; no one-element extension exists")
    r = extension_table(p, q)
    return SubmodularFn(r.ground, r.table, verify=False)


def verify_deletion_contraction(r: SetFunction, p: SubmodularFn, q: SubmodularFn) -> bool:
    """Deleting e from B(r) gives B(p); contracting e gives B(q)."""
    if r.n != p.n + 1 or not check_submodular(r.table):
        return False
    R = submodular_to_set(SubmodularFn(r.ground, r.table, verify=False))
    e = 1 << p.n
    return (deletion(R, e).points == submodular_to_set(p).points
            and contraction(R, e).points == submodular_to_set(q).points)


def check_gpoly_projection(p: SubmodularFn, q: SubmodularFn) -> bool:
    """Projecting away e from B(r) reproduces G(p, q#) ∩ Z^E."""
    r = deletion_contraction_witness(p, q)
    projected = project(submodular_to_set(r), p.ground.full_mask)
    return projected.points == gpoly_points(p, q).points


# -----------------------------
# (6): exchange
# -----------------------------

def check_exchange(P: MConvexSet, Q: MConvexSet) -> bool:
    """
    For x in Q, y in P and i in supp+(x-y) some j in supp-(x-y) has
    x - e_i + e_j in Q and y + e_i - e_j in P.
    """
    if P.n != Q.n:
        raise UsageError(f"sets live on {P.n} and {Q.n} elements")
    p_members = P.members
    q_members = Q.members
    for x in Q.points:
        for y in P.points:
            minus = list(mask_elements(supp_plus(y, x)))
            for i in mask_elements(supp_plus(x, y)):
                if not any(
                    step(x, plus=j, minus=i) in q_members and step(y, plus=i, minus=j) in p_members
                    for j in minus
                ):
                    return False
    return True


# -----------------------------
# (7)-(8): linking sets
# -----------------------------

def induction_pair(p: SetFunction, q: SetFunction) -> Tuple[LinkingSet, MConvexSet]:
    R = gpoly_points(p, q)
    top = p.rank
    G = LinkingSet(p.ground, GroundSet(1), (x + (top - sum(x),) for x in R.points), verify=False)
    W = MConvexSet(GroundSet(1), [(q.rank - p.rank,)], verify=False)
    return G, W


def induction_witness(p: SubmodularFn, q: SubmodularFn) -> Tuple[LinkingSet, MConvexSet]:
    """
    Γ = {(x, rank(P) - x(E)) : x in G(p, q#)}, W = {rank(Q) - rank(P)}.
    The right coordinate is stored negated, so inducing W picks the layer x(E) = rank(Q).
    """
    if not check_compliant(p, q):
        raise NoWitness("p and q are not compliant; no induction witness exists")
    return induction_pair(p, q)


def verify_induction(G: LinkingSet, W: MConvexSet, P: MConvexSet, Q: MConvexSet) -> bool:
    if not check_m_convex(G.points):
        return False
    try:
        induced = induce(W, G)
    except EmptyResult:
        return False
    return left_set(G).top().points == P.points and induced.points == Q.points


def _pad(points, extra: int = 1):
    return [x + (0,) * extra for x in points]


def green_triple(p: SetFunction, q: SetFunction, k: Optional[int] = None):
    G7, _ = induction_pair(p, q)
    n = p.n
    ground = p.ground.extended()
    k = p.rank - q.rank if k is None else k
    zeros = (0,) * n
    G = LinkingSet(ground, ground, (x + (0,) + zeros + r for x, r in map(G7.split, G7.points)), verify=False)
    X = LinkingSet(ground, ground, [zeros + (-k,) + zeros + (k,)], verify=False)
    return G, X


def green_witness(p: SubmodularFn, q: SubmodularFn) -> Tuple[LinkingSet, LinkingSet, LinkingSet]:
    """
    Square witnesses on E ⊔ {e}: Γ carries the induction witness with its right
    part moved into the auxiliary coordinate, X = {(-k e_aux ; k e_aux)} with
    k = rank(P) - rank(Q), and Δ = Γ * X.
    """
    if not check_compliant(p, q):
        raise NoWitness("p and q are not compliant; no R-preorder witness exists")
    G, X = green_triple(p, q)
    return G, product(G, X), X


def verify_green(G: LinkingSet, D: LinkingSet, X: LinkingSet, P: MConvexSet, Q: MConvexSet) -> bool:
    try:
        composed = product(G, X)
    except EmptyResult:
        return False
    if composed.points != D.points:
        return False
    if not (check_m_convex(G.points) and check_m_convex(D.points)):
        return False
    return (left_set(G).top().points == tuple(sorted(_pad(P.points)))
            and left_set(D).top().points == tuple(sorted(_pad(Q.points))))


# -----------------------------
# (9)-(10): lifts
# -----------------------------

def lifted_pair(P: MConvexSet, Q: MConvexSet, caps: Caps) -> Tuple[MConvexSet, MConvexSet, LiftCertificate]:
    M, N, cert = compatible_lifts(P, Q, caps)
    if len(M) * len(N) > caps.lift_pairs:
        raise CapExceeded("lift_pairs", len(M) * len(N), caps.lift_pairs)
    return M, N, cert


def check_matroid_lift_quotient(P: MConvexSet, Q: MConvexSet, caps: Optional[Caps] = None) -> bool:
    caps = caps or DEFAULT_CAPS
    M, N, _ = lifted_pair(P, Q, caps)
    return check_exchange(M, N)


def flag_shape(point: Sequence[int], high: int, low: int) -> bool:
    """Exactly `low` coordinates equal 2, `high - low` equal 1, the rest 0."""
    if high < low:
        return False
    twos = sum(1 for c in point if c == 2)
    ones = sum(1 for c in point if c == 1)
    zeros = sum(1 for c in point if c == 0)
    return twos == low and ones == high - low and twos + ones + zeros == len(point)


def check_compressed_quotient(P: MConvexSet, Q: MConvexSet, caps: Optional[Caps] = None) -> bool:
    """Every greedy vertex of M + N is a vertex of Δ(rank M) + Δ(rank N)."""
    caps = caps or DEFAULT_CAPS
    M, N, cert = lifted_pair(P, Q, caps)
    size = cert.phi.domain
    if size > caps.lift_sweep_v:
        raise CapExceeded("lift_sweep_v", size, caps.lift_sweep_v)
    m_table = set_to_submodular(M)
    n_table = set_to_submodular(N)
    for order in itertools.permutations(range(size)):
        x = greedy_vertex(m_table, order)
        y = greedy_vertex(n_table, order)
        if not flag_shape([a + b for a, b in zip(x, y)], M.rank, N.rank):
            return False
    return True

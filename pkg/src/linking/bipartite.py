from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import sympy as sp

from src.lattice.core import GroundSet, LatticePoint, mask_elements, neg
from src.lattice.errors import UsageError
from src.linking.linking_sets import LinkingSet

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


# -----------------------------
# Graph construction
# -----------------------------

def left_node(i: int) -> Tuple[str, int]:
    return ("v", i)


def right_node(j: int) -> Tuple[str, int]:
    return ("u", j)


def bipartite_graph(
    left_size: int,
    right_size: int,
    edges: Iterable[Sequence],
) -> nx.Graph:
    """
    Build G = (V, U; E). Edges are (i, j) or (i, j, weight), 0-indexed;
    weights default to 0 and are kept exact as Fractions.
    """
    if left_size < 1 or right_size < 1:
        raise UsageError(f"bipartite sides must be nonempty, got {left_size}x{right_size}")
    G = nx.Graph(left_size=left_size, right_size=right_size)
    G.add_nodes_from((left_node(i) for i in range(left_size)), bipartite=0)
    G.add_nodes_from((right_node(j) for j in range(right_size)), bipartite=1)
    for e in edges:
        i, j = int(e[0]), int(e[1])
        if not (0 <= i < left_size and 0 <= j < right_size):
            raise UsageError(f"edge ({i + 1}, {j + 1}) outside the {left_size}x{right_size} sides")
        w = Fraction(e[2]) if len(e) > 2 else Fraction(0)
        G.add_edge(left_node(i), right_node(j), weight=w)
    return G


def sides(G: nx.Graph) -> Tuple[int, int]:
    return G.graph["left_size"], G.graph["right_size"]


def edge_list(G: nx.Graph) -> List[Tuple[int, int, Fraction]]:
    out = []
    for a, b, data in G.edges(data=True):
        if a[0] == "u":
            a, b = b, a
        out.append((a[1], b[1], data.get("weight", Fraction(0))))
    return sorted(out)


def compose_graphs(G: nx.Graph, H: nx.Graph) -> nx.Graph:
    """G·H: (v, t) is an edge when some middle u has (v, u) in G and (u, t) in H."""
    v, u = sides(G)
    u2, t = sides(H)
    if u != u2:
        raise UsageError(f"cannot compose graphs with middle sides {u} and {u2}")
    h_out = {}
    for a, b, _ in edge_list(H):
        h_out.setdefault(a, set()).add(b)
    edges = {(a, c) for a, b, _ in edge_list(G) for c in h_out.get(b, ())}
    return bipartite_graph(v, t, sorted(edges))


def _indicator(n: int, elements: Iterable[int]) -> LatticePoint:
    x = [0] * n
    for i in elements:
        x[i] += 1
    return tuple(x)


def matchings(G: nx.Graph) -> Iterable[Tuple[Tuple[int, int, Fraction], ...]]:
    """Every matching of G (including the empty one) as a tuple of edges."""
    edges = edge_list(G)
    v, u = sides(G)
    for size in range(min(v, u) + 1):
        for combo in itertools.combinations(edges, size):
            if nx.is_matching(G, {(left_node(a), right_node(b)) for a, b, _ in combo}):
                yield combo


# -----------------------------
# Linking sets from graphs and matrices
# -----------------------------

def from_bipartite_matchings(G: nx.Graph) -> LinkingSet:
    """Γ_G = {(e_A, -e_B) : some matching of G joins A to B exactly}."""
    v, u = sides(G)
    pts = {
        _indicator(v, (a for a, _, _ in m)) + neg(_indicator(u, (b for _, b, _ in m)))
        for m in matchings(G)
    }
    return LinkingSet(GroundSet(v), GroundSet(u), pts, verify=False)


def from_bipartite_subsets(G: nx.Graph) -> LinkingSet:
    """One point per edge subset: left degrees, negated right degrees."""
    v, u = sides(G)
    edges = edge_list(G)
    pts = set()
    for size in range(len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            pts.add(_indicator(v, (a for a, _, _ in combo)) + neg(_indicator(u, (b for _, b, _ in combo))))
    logger.debug("edge-subset linking set: %d edges -> %d points", len(edges), len(pts))
    return LinkingSet(GroundSet(v), GroundSet(u), pts, verify=False)


def transversal_independent_sets(G: nx.Graph) -> List[LatticePoint]:
    """0/1 indicators of left subsets that can be matched into the right side."""
    v, _ = sides(G)
    right = [n for n, d in G.nodes(data=True) if d["bipartite"] == 1]
    out = []
    for A in range(1 << v):
        chosen = [left_node(i) for i in mask_elements(A)]
        H = G.subgraph(chosen + right)
        size = len(nx.bipartite.maximum_matching(H, top_nodes=chosen)) // 2 if chosen else 0
        if size == len(chosen):
            out.append(_indicator(v, mask_elements(A)))
    return sorted(out)


def from_matrix(M: Sequence[Sequence], right_size: Optional[int] = None) -> LinkingSet:
    """Γ_M = {(e_A, -e_B) : |A| = |B|, det M[A, B] != 0}, rows V and columns U."""
    rows = [[Fraction(c) for c in row] for row in M]
    if not rows:
        raise UsageError("matrix must have at least one row")
    v = len(rows)
    u = right_size if right_size is not None else len(rows[0])
    if any(len(row) != u for row in rows):
        raise UsageError("matrix rows must have equal length")
    mat = sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in row] for row in rows])
    pts = []
    for k in range(min(v, u) + 1):
        for A in itertools.combinations(range(v), k):
            for B in itertools.combinations(range(u), k):
                if k == 0 or mat.extract(list(A), list(B)).det() != 0:
                    pts.append(_indicator(v, A) + neg(_indicator(u, B)))
    return LinkingSet(GroundSet(v), GroundSet(u), pts, verify=False)

"""
Minimizer atlas of a pair of functions.

For every functional u the minimizer sets f^u, g^u are read off a face of the
lower convex hull of the lifted graph {(x, (f □ g)(x))}: the faces are found
by exact facet enumeration over the affine hull, and a functional is picked
from the relative interior of each lower face's normal cone.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import sympy as sp

from src.config.caps import DEFAULT_CAPS, Caps
from src.functions.mfunc import MFunc, convolution, minimizer, tilt
from src.lattice.core import LatticePoint
from src.lattice.errors import CapExceeded, Disagreement
from src.msets.mconvex import MConvexSet

logger = logging.getLogger(__name__)

Face = FrozenSet[int]
Vector = List[Fraction]


@dataclass(frozen=True)
class AtlasCell:
    u: Tuple[Fraction, ...]
    fcell: MConvexSet
    gcell: MConvexSet
    hcell: Tuple[LatticePoint, ...]


@dataclass(frozen=True)
class MinimizerAtlas:
    f: MFunc
    g: MFunc
    cells: Tuple[AtlasCell, ...]

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)


# -----------------------------
# Lower hull
# -----------------------------

# exact rational algebra via sympy

def _matrix(rows: Sequence[Sequence[Fraction]]) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in row] for row in rows])


def _vector(col) -> Vector:
    return [Fraction(int(c.p), int(c.q)) for c in (sp.Rational(x) for x in col)]


def _dot(v1: Sequence[Fraction], v2: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(v1, v2)), Fraction(0))


def _rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return _matrix(rows).rank() if rows else 0


def _rref(rows: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """Nonzero rows of the reduced row echelon form."""
    reduced, pivots = _matrix(rows).rref()
    return [_vector(reduced.row(i)) for i in range(len(pivots))]


def _nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    return [_vector(v) for v in _matrix(rows).nullspace()]


def _combine(coeffs: Sequence[Fraction], basis: Sequence[Vector]) -> Vector:
    out = [Fraction(0)] * len(basis[0])
    for c, b in zip(coeffs, basis):
        if c:
            out = [o + c * v for o, v in zip(out, b)]
    return out


def _facets(Z: List[Vector], basis: List[Vector]) -> Dict[Face, Vector]:
    """Facets of conv(Z) inside its affine hull, each with an inward normal lying in span(basis)."""
    D = len(basis)
    found: Dict[Face, Vector] = {}
    for combo in itertools.combinations(range(len(Z)), D):
        if any(set(combo) <= face for face in found):
            continue
        origin = Z[combo[0]]
        diffs = [[a - b for a, b in zip(Z[i], origin)] for i in combo[1:]]
        if diffs and _rank(diffs) < len(diffs):
            continue
        system = [[_dot(b, d) for b in basis] for d in diffs]
        null = _nullspace(system, D)
        if len(null) != 1:
            continue
        a = _combine(null[0], basis)
        level = _dot(a, origin)
        values = [_dot(a, z) for z in Z]
        if all(v >= level for v in values):
            pass
        elif all(v <= level for v in values):
            a = [-c for c in a]
            level = -level
            values = [-v for v in values]
        else:
            continue
        face = frozenset(i for i, v in enumerate(values) if v == level)
        found.setdefault(face, a)
    return found


def _faces(facets: Dict[Face, Vector], size: int) -> List[Face]:
    """Closure of the facet point-sets under intersection, plus the whole hull."""
    faces = set(facets)
    faces.add(frozenset(range(size)))
    frontier = set(faces)
    while frontier:
        new = set()
        for a in frontier:
            for b in facets:
                c = a & b
                if c and c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    return sorted(faces, key=lambda F: (len(F), sorted(F)))


def _total(vectors: Sequence[Vector], width: int) -> Vector:
    out = [Fraction(0)] * width
    for v in vectors:
        out = [x + y for x, y in zip(out, v)]
    return out


def lower_faces(Z: Sequence[Sequence]) -> List[Tuple[Face, Tuple[Fraction, ...]]]:
    """
    Lower faces of conv(Z), Z ⊂ Q^{n+1} with the last coordinate as height.

    Each face comes with u in Q^n such that the face is exactly the argmin over
    Z of z_last - <u, z[:n]>.
    """
    Z = [[Fraction(c) for c in z] for z in Z]
    n = len(Z[0]) - 1
    if len(Z) == 1:
        return [(frozenset([0]), tuple(Fraction(0) for _ in range(n)))]
    basis = _rref([[a - b for a, b in zip(z, Z[0])] for z in Z[1:]])
    vertical = [Fraction(0)] * n + [Fraction(1)]
    vertical_in_hull = _rank(basis + [vertical]) == len(basis)
    if vertical_in_hull:
        lift = None
    else:
        lift = next(v for v in _nullspace(basis, n + 1) if v[-1] != 0)
        lift = [c / lift[-1] for c in lift]

    facets = _facets(Z, basis)
    out = []
    for F in _faces(facets, len(Z)):
        incident = [a for face, a in facets.items() if F <= face]
        A = _total(incident, n + 1)
        if vertical_in_hull:
            upward = _total([a for a in incident if a[-1] > 0], n + 1)
            if upward[-1] <= 0:
                continue
            if A[-1] <= 0:
                # tilt the relative-interior point towards the upward normals
                weight = 1 - A[-1] / upward[-1]
                A = [x + weight * y for x, y in zip(A, upward)]
            u = tuple(-c / A[-1] for c in A[:n])
        else:
            a = [x + (1 - A[-1]) * y for x, y in zip(A, lift)]
            u = tuple(-c for c in a[:n])
        out.append((F, u))
    return out


# -----------------------------
# Atlas
# -----------------------------

def minimizer_atlas(f: MFunc, g: MFunc, caps: Optional[Caps] = None) -> MinimizerAtlas:
    """
    One cell per lower face of the lifted graph of f □ g. Since
    (f □ g)^u = f^u + g^u, each cell carries the minimizer sets of f and g
    at a functional u from the relative interior of that face's normal cone.
    """
    caps = caps or DEFAULT_CAPS
    pairs = len(f) * len(g)
    if pairs > caps.atlas_pairs:
        raise CapExceeded("atlas_pairs", pairs, caps.atlas_pairs)
    h = convolution(f, g)
    dom = list(h.domain)
    Z = [list(x) + [v] for x, v in h.values]
    cells = []
    for face, u in lower_faces(Z):
        tilted = [tilt(h, x, u) for x in dom]
        best = min(tilted)
        argmin = frozenset(i for i, v in enumerate(tilted) if v == best)
        if argmin != face:
            raise Disagreement(f"functional {[str(c) for c in u]} does not expose the expected face")
        cells.append(AtlasCell(u, minimizer(f, u), minimizer(g, u), tuple(dom[i] for i in sorted(face))))
    logger.debug("atlas: %d lifted points -> %d cells", len(Z), len(cells))
    return MinimizerAtlas(f, g, tuple(cells))

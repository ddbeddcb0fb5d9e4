from __future__ import annotations

import itertools
import logging
from math import comb
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from src.config.caps import Caps, DEFAULT_CAPS
from src.lattice.core import GroundSet, LatticePoint, bounding_box, check_width
from src.lattice.errors import CapExceeded, EmptyResult, UsageError
from src.msets.mconvex import MConvexSet

logger = logging.getLogger(__name__)

Box = Tuple[LatticePoint, LatticePoint]


@dataclass(frozen=True)
class Surjection:
    """φ: V -> U stored as the target of every element of V (0-indexed)."""
    targets: Tuple[int, ...]
    codomain: int

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if any(not 0 <= t < self.codomain for t in self.targets):
            raise UsageError(f"surjection targets must lie in 1..{self.codomain}")
        hit = set(self.targets)
        missing = [i + 1 for i in range(self.codomain) if i not in hit]
        if missing:
            raise UsageError(f"surjection misses elements {missing}")

    @classmethod
    def from_fiber_sizes(cls, sizes: Sequence[int]) -> "Surjection":
        """Contiguous fibers: the first sizes[0] elements map to 1, and so on."""
        if any(s < 1 for s in sizes):
            raise UsageError(f"fiber sizes must be positive, got {list(sizes)}")
        return cls(tuple(i for i, s in enumerate(sizes) for _ in range(s)), len(sizes))

    @property
    def domain(self) -> int:
        return len(self.targets)

    def fibers(self) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in range(self.codomain)]
        for j, t in enumerate(self.targets):
            out[t].append(j)
        return tuple(tuple(f) for f in out)


@dataclass(frozen=True)
class LiftCertificate:
    phi: Surjection
    v: LatticePoint
    box: Box

    def to_dict(self) -> dict:
        return {
            "phi": [t + 1 for t in self.phi.targets],
            "v": list(self.v),
            "box": [list(self.box[0]), list(self.box[1])],
        }


# -----------------------------
# Aggregation
# -----------------------------

def project_phi(y: Sequence[int], phi: Surjection, v: Sequence[int]) -> LatticePoint:
    """π_φ(y) + v: fiberwise coordinate sums, then translate."""
    check_width(y, phi.domain, "lifted point")
    check_width(v, phi.codomain, "translation vector")
    out = list(v)
    for j, t in enumerate(phi.targets):
        out[t] += y[j]
    return tuple(out)


def project_phi_set(S, phi: Surjection, v: Sequence[int]) -> List[LatticePoint]:
    return sorted({project_phi(y, phi, v) for y in S})


def _compositions(total: int, lo: Sequence[int], hi: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All (c_1..c_m) with lo <= c <= hi and sum c = total."""
    if not lo:
        if total == 0:
            yield ()
        return
    rest_lo = sum(lo[1:])
    rest_hi = sum(hi[1:])
    for c in range(max(lo[0], total - rest_hi), min(hi[0], total - rest_lo) + 1):
        for tail in _compositions(total - c, lo[1:], hi[1:]):
            yield (c,) + tail


def box_lift(
    P: MConvexSet,
    box: Box,
    phi: Surjection,
    v: Sequence[int],
    caps: Optional[Caps] = None,
) -> MConvexSet:
    """{y in box : π_φ(y) + v in P}."""
    caps = caps or DEFAULT_CAPS
    lo, hi = box
    check_width(lo, phi.domain, "lift box lower corner")
    check_width(hi, phi.domain, "lift box upper corner")
    check_width(v, P.n, "translation vector")
    if phi.codomain != P.n:
        raise UsageError(f"surjection lands in {phi.codomain} elements, set lives on {P.n}")
    if any(a > b for a, b in zip(lo, hi)):
        raise UsageError("lift box corners must satisfy lower <= upper")
    if phi.domain > caps.lift_membership_v:
        raise CapExceeded("lift_membership_v", phi.domain, caps.lift_membership_v)
    fibers = phi.fibers()
    out = []
    for x in P.points:
        per_coord = [
            list(_compositions(x[i] - v[i], [lo[j] for j in f], [hi[j] for j in f]))
            for i, f in enumerate(fibers)
        ]
        for parts in itertools.product(*per_coord):
            y = [0] * phi.domain
            for f, part in zip(fibers, parts):
                for j, c in zip(f, part):
                    y[j] = c
            out.append(tuple(y))
    if not out:
        raise EmptyResult("box lift is empty")
    logger.debug("box lift: |P|=%d, |V|=%d -> %d points", len(P), phi.domain, len(out))
    return MConvexSet(GroundSet(phi.domain), out, verify=False)


# -----------------------------
# Canonical lifts
# -----------------------------

def _fiber_caps_matroid(widths: Sequence[int]) -> List[List[int]]:
    # width-0 coordinates keep one element pinned to 0
    return [[1] * b if b > 0 else [0] for b in widths]


def _fiber_caps_kpoly(widths: Sequence[int], k: int) -> List[List[int]]:
    """b = m*k + r with 0 < r <= k: m fibers capped at k, one capped at r."""
    out = []
    for b in widths:
        if b == 0:
            out.append([0])
            continue
        m = (b - 1) // k
        out.append([k] * m + [b - m * k])
    return out


def _lift_with_caps(P: MConvexSet, base: LatticePoint, fiber_caps: List[List[int]], caps: Optional[Caps]):
    phi = Surjection.from_fiber_sizes([len(c) for c in fiber_caps])
    hi = tuple(c for cs in fiber_caps for c in cs)
    box = ((0,) * len(hi), hi)
    cert = LiftCertificate(phi=phi, v=tuple(base), box=box)
    return box_lift(P, box, phi, base, caps), cert


def matroid_lift(P: MConvexSet, caps: Optional[Caps] = None) -> Tuple[MConvexSet, LiftCertificate]:
    lo, hi = bounding_box(P.points)
    widths = [b - a for a, b in zip(lo, hi)]
    return _lift_with_caps(P, lo, _fiber_caps_matroid(widths), caps)


def k_polymatroid_lift(P: MConvexSet, k: int, caps: Optional[Caps] = None) -> Tuple[MConvexSet, LiftCertificate]:
    if k < 1:
        raise UsageError(f"k must be >= 1, got {k}")
    lo, hi = bounding_box(P.points)
    widths = [b - a for a, b in zip(lo, hi)]
    return _lift_with_caps(P, lo, _fiber_caps_kpoly(widths, k), caps)


def compatible_lifts(
    P: MConvexSet,
    Q: MConvexSet,
    caps: Optional[Caps] = None,
) -> Tuple[MConvexSet, MConvexSet, LiftCertificate]:
    """Matroid lifts of P and Q through one shared box, surjection and translation."""
    if P.n != Q.n:
        raise UsageError(f"sets on {P.n} and {Q.n} elements cannot share a lift")
    lo, hi = bounding_box(P.points + Q.points)
    widths = [b - a for a, b in zip(lo, hi)]
    fiber_caps = _fiber_caps_matroid(widths)
    M, cert = _lift_with_caps(P, lo, fiber_caps, caps)
    N = box_lift(Q, cert.box, cert.phi, cert.v, caps)
    return M, N, cert


def lift_cardinality(P: MConvexSet) -> int:
    """Σ_x Π_i C(b_i, x_i - ω_i): the number of bases of matroid_lift(P)."""
    lo, hi = bounding_box(P.points)
    total = 0
    for x in P.points:
        term = 1
        for a, b, c in zip(lo, hi, x):
            term *= comb(b - a, c - a)
        total += term
    return total

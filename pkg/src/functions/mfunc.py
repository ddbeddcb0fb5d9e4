from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from src.lattice.core import (
    INF,
    Extended,
    GroundSet,
    LatticePoint,
    add,
    check_width,
    ext_add,
    ext_lt,
    ext_min,
    mask_elements,
    neg,
    step,
    supp_plus,
    to_rat,
)
from src.lattice.errors import EmptyResult, UsageError
from src.linking.bipartite import matchings, sides
from src.msets.mconvex import MConvexSet, MNatSet

logger = logging.getLogger(__name__)

ValueMap = Union[Mapping[Sequence[int], object], Iterable[Tuple[Sequence[int], object]]]


def _normalize(ground: GroundSet, values: ValueMap) -> Tuple[Tuple[LatticePoint, Fraction], ...]:
    items = values.items() if isinstance(values, Mapping) else values
    out: Dict[LatticePoint, Fraction] = {}
    for x, v in items:
        x = tuple(x)
        check_width(x, ground.size)
        if x in out:
            raise UsageError(f"point {list(x)} listed twice")
        out[x] = to_rat(v)
    if not out:
        raise UsageError("a function needs a nonempty domain")
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class MFunc:
    """
    Finite map lattice point -> exact rational; every other point is +inf.
    Certified on construction unless verify=False.
    """
    ground: GroundSet
    values: Tuple[Tuple[LatticePoint, Fraction], ...]

    def __init__(self, ground: GroundSet, values: ValueMap, verify: bool = True):
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "values", _normalize(ground, values))
        object.__setattr__(self, "_lookup", dict(self.values))
        if verify:
            self._certify()

    def _certify(self) -> None:
        if not check_m_convex_fn(self):
            raise UsageError("function fails the M-convex exchange inequality")

    def __call__(self, x: Sequence[int]) -> Extended:
        return self._lookup.get(tuple(x), INF)

    @property
    def n(self) -> int:
        return self.ground.size

    @property
    def domain(self) -> Tuple[LatticePoint, ...]:
        return tuple(x for x, _ in self.values)

    def as_dict(self) -> Dict[LatticePoint, Fraction]:
        return dict(self._lookup)

    @property
    def rank(self) -> int:
        return sum(self.values[0][0])

    @property
    def min_value(self) -> Fraction:
        return min(v for _, v in self.values)

    def dom_set(self) -> MConvexSet:
        return MConvexSet(self.ground, self.domain, verify=False)

    def __len__(self) -> int:
        return len(self.values)


class MNatFunc(MFunc):
    """As MFunc, certified against both the between-layer and within-layer axioms."""

    def _certify(self) -> None:
        if not check_mnat_fn(self):
            raise UsageError("function fails the M♮-convex exchange inequalities")

    def dom_set(self) -> MNatSet:
        return MNatSet(self.ground, self.domain, verify=False)

    @property
    def rank(self) -> int:
        return max(self.layer_sums())

    def layer_sums(self) -> List[int]:
        return sorted({sum(x) for x in self.domain})

    def layer(self, k: int) -> MFunc:
        vals = [(x, v) for x, v in self.values if sum(x) == k]
        if not vals:
            raise UsageError(f"no layer at coordinate sum {k}")
        return MFunc(self.ground, vals, verify=False)

    def top(self) -> MFunc:
        return self.layer(max(self.layer_sums()))

    def bottom(self) -> MFunc:
        return self.layer(min(self.layer_sums()))


def indicator(S, value=0) -> MFunc:
    """The function equal to `value` on S and +inf elsewhere."""
    return MFunc(S.ground, [(x, value) for x in S.points], verify=False)


# -----------------------------
# Axioms
# -----------------------------

def _within_layer_ok(f: MFunc, x: LatticePoint, y: LatticePoint, fx: Fraction, fy: Fraction) -> bool:
    minus = list(mask_elements(supp_plus(y, x)))
    for i in mask_elements(supp_plus(x, y)):
        best = ext_min(
            ext_add(f(step(x, plus=j, minus=i)), f(step(y, plus=i, minus=j))) for j in minus
        )
        if ext_lt(fx + fy, best):
            return False
    return True


def check_m_convex_fn(f: MFunc) -> bool:
    """f(x) + f(y) >= min_j f(x - e_i + e_j) + f(y + e_i - e_j) for all x, y in dom f, i in supp+(x-y)."""
    for x, fx in f.values:
        for y, fy in f.values:
            if x != y and not _within_layer_ok(f, x, y, fx, fy):
                return False
    return True


def check_mnat_fn(f: MFunc) -> bool:
    for x, fx in f.values:
        sx = sum(x)
        for y, fy in f.values:
            sy = sum(y)
            if sx > sy:
                best = ext_min(
                    ext_add(f(step(x, minus=j)), f(step(y, plus=j))) for j in mask_elements(supp_plus(x, y))
                )
                if ext_lt(fx + fy, best):
                    return False
            elif sx == sy and x != y and not _within_layer_ok(f, x, y, fx, fy):
                return False
    return True


# -----------------------------
# Minimizers and convolution
# -----------------------------

def tilt(f: MFunc, x: LatticePoint, u: Sequence[Fraction]) -> Fraction:
    return f(x) - sum((Fraction(a) * b for a, b in zip(u, x)), Fraction(0))


def minimizer(f: MFunc, u: Optional[Sequence] = None) -> MConvexSet:
    """f^u = argmin of f(x) - <u, x> over dom f, ties kept."""
    u = [Fraction(0)] * f.n if u is None else [to_rat(c) for c in u]
    check_width(u, f.n, "functional u")
    tilted = [(x, tilt(f, x, u)) for x in f.domain]
    best = min(v for _, v in tilted)
    return MConvexSet(f.ground, [x for x, v in tilted if v == best], verify=False)


def convolution(f: MFunc, g: MFunc, verify: bool = False) -> MFunc:
    """(f □ g)(x) = min over x1 + x2 = x of f(x1) + g(x2)."""
    if f.n != g.n:
        raise UsageError(f"cannot convolve functions on {f.n} and {g.n} elements")
    out: Dict[LatticePoint, Fraction] = {}
    for x1, a in f.values:
        for x2, b in g.values:
            z = add(x1, x2)
            if z not in out or a + b < out[z]:
                out[z] = a + b
    return MFunc(f.ground, out, verify=verify)


def union_of_graphs(functions: Sequence[MFunc]) -> MNatFunc:
    """Pointwise minimum of functions with pairwise disjoint domains."""
    out: Dict[LatticePoint, Fraction] = {}
    for f in functions:
        for x, v in f.values:
            if x in out:
                raise UsageError(f"domains overlap at {list(x)}")
            out[x] = v
    return MNatFunc(functions[0].ground, out, verify=False)


# -----------------------------
# Linking functions
# -----------------------------

def _left_ground(gamma: MFunc, left_size: int) -> GroundSet:
    if not 0 < left_size < gamma.n:
        raise UsageError(f"left side size {left_size} out of range for a function on {gamma.n} elements")
    return gamma.ground.restrict((1 << left_size) - 1)


def induce_fn(r: MFunc, gamma: MFunc, left_size: int) -> MFunc:
    """x -> min over y of gamma(x, -y) + r(y); gamma lives on V ⊔ U with |V| = left_size."""
    if gamma.n - left_size != r.n:
        raise UsageError(f"function on {r.n} elements cannot be induced through |U|={gamma.n - left_size}")
    out: Dict[LatticePoint, Fraction] = {}
    for z, gv in gamma.values:
        x, s = z[:left_size], z[left_size:]
        rv = r(neg(s))
        if rv is INF:
            continue
        val = gv + rv
        if x not in out or val < out[x]:
            out[x] = val
    if not out:
        raise EmptyResult("induced function has empty domain")
    return MFunc(_left_ground(gamma, left_size), out, verify=False)


def left_function(gamma: MFunc, left_size: int) -> MNatFunc:
    """π_V(gamma)(x) = min over the right part of gamma(x, s)."""
    out: Dict[LatticePoint, Fraction] = {}
    for z, v in gamma.values:
        x = z[:left_size]
        if x not in out or v < out[x]:
            out[x] = v
    return MNatFunc(_left_ground(gamma, left_size), out, verify=False)


def weighted_bipartite_linking_function(G: nx.Graph) -> MFunc:
    """gamma_G(e_A, -e_B) = minimum total weight of a matching joining A to B exactly."""
    v, u = sides(G)
    out: Dict[LatticePoint, Fraction] = {}
    for m in matchings(G):
        x = [0] * v
        y = [0] * u
        for a, b, _ in m:
            x[a] = 1
            y[b] = -1
        z = tuple(x) + tuple(y)
        w = sum((wt for _, _, wt in m), Fraction(0))
        if z not in out or w < out[z]:
            out[z] = w
    return MFunc(GroundSet(v + u), out, verify=False)


# -----------------------------
# Truncation / elongation
# -----------------------------

def truncation_fn(f: MFunc) -> MFunc:
    """f^tr(x) = min{f(y) : y >= x}, on the truncation of dom f."""
    out: Dict[LatticePoint, Fraction] = {}
    for y, v in f.values:
        for i in range(f.n):
            x = step(y, minus=i)
            if x not in out or v < out[x]:
                out[x] = v
    return MFunc(f.ground, out, verify=False)


def elongation_fn(f: MFunc) -> MFunc:
    """f^el(x) = min{f(y) : y <= x}, on the elongation of dom f."""
    out: Dict[LatticePoint, Fraction] = {}
    for y, v in f.values:
        for i in range(f.n):
            x = step(y, plus=i)
            if x not in out or v < out[x]:
                out[x] = v
    return MFunc(f.ground, out, verify=False)

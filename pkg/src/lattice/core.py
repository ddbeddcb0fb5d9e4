from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

from src.lattice.errors import UsageError

LatticePoint = Tuple[int, ...]
SubsetMask = int
Rat = Fraction


class Infinity(enum.Enum):
    """+inf for function values; points outside a domain evaluate to this."""
    POS = "inf"

    def __repr__(self) -> str:
        return "INF"


INF = Infinity.POS
Extended = Union[Fraction, Infinity]


# -----------------------------
# Extended rationals
# -----------------------------

def to_rat(value) -> Fraction:
    """Parse an int, Fraction or "num/den" string into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise UsageError(f"not a rational value: {value!r}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"not a rational value: {value!r}") from exc
    raise UsageError(f"not a rational value: {value!r}")


def format_rat(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def ext_add(a: Extended, b: Extended) -> Extended:
    if a is INF or b is INF:
        return INF
    return a + b


def ext_lt(a: Extended, b: Extended) -> bool:
    if a is INF:
        return False
    if b is INF:
        return True
    return a < b


def ext_le(a: Extended, b: Extended) -> bool:
    return not ext_lt(b, a)


def ext_min(values: Iterable[Extended]) -> Extended:
    best: Extended = INF
    for v in values:
        if ext_lt(v, best):
            best = v
    return best


# -----------------------------
# Ground sets and masks
# -----------------------------

@dataclass(frozen=True)
class GroundSet:
    """
    The finite set E = {1..n}. Elements are 0-indexed internally and printed
    1-indexed (or by label when labels are present).
    """
    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise UsageError(f"ground set size must be a positive integer, got {self.size!r}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.size:
                raise UsageError(f"expected {self.size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise UsageError(f"labels must be unique: {list(labels)}")
            object.__setattr__(self, "labels", labels)

    @property
    def full_mask(self) -> SubsetMask:
        return (1 << self.size) - 1

    def name(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i + 1)

    def names(self) -> Tuple[str, ...]:
        return tuple(self.name(i) for i in range(self.size))

    def subsets(self) -> range:
        return range(1 << self.size)

    def mask_of(self, elements: Iterable[int]) -> SubsetMask:
        """0-indexed elements -> mask."""
        mask = 0
        for i in elements:
            if not 0 <= i < self.size:
                raise UsageError(f"element {i + 1} not in ground set of size {self.size}")
            mask |= 1 << i
        return mask

    def format_mask(self, mask: SubsetMask) -> str:
        return "{" + ",".join(self.name(i) for i in mask_elements(mask)) + "}"

    def restrict(self, mask: SubsetMask) -> "GroundSet":
        idx = list(mask_elements(mask))
        if not idx:
            raise UsageError("cannot restrict to the empty subset")
        labels = tuple(self.name(i) for i in idx) if self.labels is not None else None
        return GroundSet(len(idx), labels)

    def disjoint_union(self, other: "GroundSet") -> "GroundSet":
        if self.labels is None and other.labels is None:
            return GroundSet(self.size + other.size)
        left = self.names() if self.labels is not None else tuple(f"v{i + 1}" for i in range(self.size))
        right = other.names() if other.labels is not None else tuple(f"u{i + 1}" for i in range(other.size))
        return GroundSet(self.size + other.size, left + right)

    def extended(self, label: str = "e") -> "GroundSet":
        """E ⊔ {e}; the new element is the last coordinate."""
        if self.labels is None:
            return GroundSet(self.size + 1)
        if label in self.labels:
            raise UsageError(f"label {label!r} already used")
        return GroundSet(self.size + 1, self.labels + (label,))


def mask_elements(mask: SubsetMask) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: SubsetMask) -> int:
    return bin(mask).count("1")


def check_mask(mask: SubsetMask, n: int) -> None:
    if mask < 0 or mask >> n:
        raise UsageError(f"subset mask {mask} does not fit a ground set of size {n}")


# -----------------------------
# Lattice points
# -----------------------------

def check_width(x: Sequence[int], n: int, what: str = "point") -> None:
    if len(x) != n:
        raise UsageError(f"{what} has width {len(x)}, expected {n}")


def coord_sum(x: LatticePoint, A: Optional[SubsetMask] = None) -> int:
    """x(A) = sum of x_i over i in A; A=None means the whole ground set."""
    if A is None:
        return sum(x)
    check_mask(A, len(x))
    return sum(x[i] for i in mask_elements(A))


def supp_plus(x: LatticePoint, y: LatticePoint) -> SubsetMask:
    """Mask of coordinates with x_i > y_i."""
    check_width(y, len(x))
    mask = 0
    for i, (a, b) in enumerate(zip(x, y)):
        if a > b:
            mask |= 1 << i
    return mask


def supp_minus(x: LatticePoint, y: LatticePoint) -> SubsetMask:
    return supp_plus(y, x)


def unit(n: int, i: int) -> LatticePoint:
    return tuple(1 if k == i else 0 for k in range(n))


def add(x: LatticePoint, y: LatticePoint) -> LatticePoint:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: LatticePoint, y: LatticePoint) -> LatticePoint:
    return tuple(a - b for a, b in zip(x, y))


def neg(x: LatticePoint) -> LatticePoint:
    return tuple(-a for a in x)


def step(x: LatticePoint, plus: Optional[int] = None, minus: Optional[int] = None) -> LatticePoint:
    """x + e_plus - e_minus (either index may be None)."""
    out = list(x)
    if plus is not None:
        out[plus] += 1
    if minus is not None:
        out[minus] -= 1
    return tuple(out)


def leq(x: LatticePoint, y: LatticePoint) -> bool:
    return all(a <= b for a, b in zip(x, y))


def as_point(values: Sequence) -> LatticePoint:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise UsageError(f"lattice coordinates must be integers, got {v!r}")
        out.append(v)
    return tuple(out)


def bounding_box(points: Iterable[LatticePoint]) -> Tuple[LatticePoint, LatticePoint]:
    pts = list(points)
    if not pts:
        raise UsageError("bounding box of an empty point set")
    lo = tuple(min(c) for c in zip(*pts))
    hi = tuple(max(c) for c in zip(*pts))
    return lo, hi

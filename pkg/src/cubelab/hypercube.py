"""Exact combinatorics of the n-dimensional Boolean hypercube.

Points are n-bit vertices stored as Python integers (bit i = coordinate i).
A PointSet is a dense indicator over all 2^n vertices, also stored as one
big integer with bit ``idx`` set iff the vertex with encoding ``idx`` is a
member.  Dense indicators make Hamming-ball expansion a handful of bitwise
shift/mask operations per coordinate, which is what every exact oracle in
this package runs on.

Textual form of a point is a fixed-width bitstring whose leftmost character
is coordinate 0, e.g. ``Point.parse("10010")`` has x0 = 1 and x3 = 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Callable

import numpy as np

from .errors import CapExceededError, ValidationError

# Dense indicators above this dimension stop fitting comfortably in RAM
# (2^24 bits = 2 MiB per set); larger n must use sampling paths.
EXACT_ORACLE_CAP = 24


@dataclass(frozen=True, slots=True)
class Point:
    """A vertex of {0,1}^n, encoded as the integer ``sum(x_i << i)``."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"point dimension must be >= 1, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValidationError(f"bits 0x{self.bits:x} out of range for n={self.n}")

    @classmethod
    def parse(cls, text: str) -> "Point":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValidationError(f"not a bitstring: {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    def bit(self, i: int) -> int:
        return (self.bits >> i) & 1

    def flip(self, *positions: int) -> "Point":
        mask = 0
        for i in positions:
            if not 0 <= i < self.n:
                raise ValidationError(f"flip position {i} out of range for n={self.n}")
            mask |= 1 << i
        return Point(self.n, self.bits ^ mask)

    def complement(self) -> "Point":
        return Point(self.n, self.bits ^ ((1 << self.n) - 1))

    def __str__(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))


def hamming_distance(x: Point, y: Point) -> int:
    """Number of coordinates where x and y differ."""
    if x.n != y.n:
        raise ValidationError(f"dimension mismatch: {x.n} != {y.n}")
    return (x.bits ^ y.bits).bit_count()


def ball_size(n: int, rho: int) -> int:
    """|B_rho(x)| = sum_{i<=rho} C(n,i), exact in big integers."""
    if rho < 0:
        raise ValidationError(f"radius must be >= 0, got {rho}")
    rho = min(rho, n)
    return sum(math.comb(n, i) for i in range(rho + 1))


def ball(x: Point, rho: int) -> Iterator[Point]:
    """All points within Hamming distance rho of x.

    Enumeration order is fixed: increasing distance, then lexicographic
    flip-position combinations.  Deterministic order makes adversary
    searches reproducible and lets them exit early at the nearest witness.
    """
    if rho < 0:
        raise ValidationError(f"radius must be >= 0, got {rho}")
    rho = min(rho, x.n)
    for d in range(rho + 1):
        for combo in itertools.combinations(range(x.n), d):
            mask = 0
            for i in combo:
                mask |= 1 << i
            yield Point(x.n, x.bits ^ mask)


def ball_masks(n: int, rho: int) -> Iterator[int]:
    """Flip masks of weight <= rho in the same order ball() uses."""
    rho = min(rho, n)
    for d in range(rho + 1):
        for combo in itertools.combinations(range(n), d):
            mask = 0
            for i in combo:
                mask |= 1 << i
            yield mask


@lru_cache(maxsize=256)
def _low_half_mask(n: int, j: int) -> int:
    # Indicator positions whose encoding has bit j clear: blocks of 2^j ones
    # alternating with 2^j zeros, built by repeated doubling.
    m = (1 << (1 << j)) - 1
    width = 2 << j
    size = 1 << n
    while width < size:
        m |= m << width
        width <<= 1
    return m


@lru_cache(maxsize=256)
def coordinate_mask(n: int, j: int) -> int:
    """Dense indicator of {x : x_j = 1} as a bitset over all 2^n positions."""
    return _low_half_mask(n, j) << (1 << j)


@lru_cache(maxsize=64)
def _full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


def _flip_image(bits: int, n: int, j: int) -> int:
    # Image of a dense indicator under flipping coordinate j.
    s = 1 << j
    m0 = _low_half_mask(n, j)
    return ((bits & m0) << s) | ((bits >> s) & m0)


@dataclass(frozen=True, slots=True)
class PointSet:
    """Dense subset of {0,1}^n; bit ``idx`` of ``bits`` marks membership."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"set dimension must be >= 1, got {self.n}")
        if self.n > EXACT_ORACLE_CAP:
            raise CapExceededError(
                f"dense point sets are capped at n <= {EXACT_ORACLE_CAP}, got n={self.n}"
            )
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValidationError("indicator bits out of range for dimension")

    @classmethod
    def empty(cls, n: int) -> "PointSet":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "PointSet":
        return cls(n, _full_mask(n))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "PointSet":
        bits = 0
        size = 1 << n
        for idx in indices:
            if not 0 <= idx < size:
                raise ValidationError(f"index {idx} out of range for n={n}")
            bits |= 1 << idx
        return cls(n, bits)

    @classmethod
    def from_points(cls, n: int, points: Iterable[Point]) -> "PointSet":
        bits = 0
        for p in points:
            if p.n != n:
                raise ValidationError(f"dimension mismatch: {p.n} != {n}")
            bits |= 1 << p.bits
        return cls(n, bits)

    @classmethod
    def from_predicate(cls, n: int, pred: Callable[[Point], bool]) -> "PointSet":
        bits = 0
        for idx in range(1 << n):
            if pred(Point(n, idx)):
                bits |= 1 << idx
        return cls(n, bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.bits.bit_count()

    def contains_index(self, idx: int) -> bool:
        return bool(self.bits >> idx & 1)

    def __contains__(self, p: Point) -> bool:
        if p.n != self.n:
            raise ValidationError(f"dimension mismatch: {p.n} != {self.n}")
        return self.contains_index(p.bits)

    def _check(self, other: "PointSet") -> None:
        if self.n != other.n:
            raise ValidationError(f"dimension mismatch: {self.n} != {other.n}")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.n, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.n, self.bits & other.bits)

    def __xor__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.n, self.bits ^ other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.n, self.bits & ~other.bits)

    def complement(self) -> "PointSet":
        return PointSet(self.n, self.bits ^ _full_mask(self.n))

    def indices(self) -> Iterator[int]:
        if self.n > 16:
            yield from np.nonzero(self.to_bool_array())[0].tolist()
            return
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def points(self) -> Iterator[Point]:
        for idx in self.indices():
            yield Point(self.n, idx)

    def to_bool_array(self) -> np.ndarray:
        """Membership as a numpy bool vector indexed by vertex encoding."""
        nbytes = max(1, (1 << self.n) // 8)
        raw = self.bits.to_bytes(nbytes, "little")
        arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return arr[: 1 << self.n].astype(bool)


def expand(s: PointSet, rho: int) -> PointSet:
    """The rho-expansion {x : exists z in B_rho(x) with z in s}.

    Runs rho synchronous rounds of neighbor union over the dense indicator,
    each round OR-ing in all single-coordinate-flip images.  Cost is
    O(rho * n * 2^n / wordsize), far below any per-point ball scan.
    """
    if rho < 0:
        raise ValidationError(f"radius must be >= 0, got {rho}")
    bits = s.bits
    if bits == 0 or rho == 0:
        return s
    full = _full_mask(s.n)
    for _ in range(min(rho, s.n)):
        nxt = bits
        for j in range(s.n):
            nxt |= _flip_image(bits, s.n, j)
        if nxt == bits:
            break
        bits = nxt
        if bits == full:
            break
    return PointSet(s.n, bits)

"""Farey-Brocot (mediant) tree over [0, 1].

Levels are built by mediant interpolation starting from ``{0/1, 1/1}``; level
``k`` has ``2**(k-1) + 1`` entries.  A segment between two adjacent entries
of level ``k`` sits at partition depth ``k - 1`` and carries F-B measure
``2**-(k-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

MAX_LISTED_LEVEL = 20

ZERO = Fraction(0)
ONE = Fraction(1)

RealLike = Union[Fraction, int, tuple]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def is_unimodular(a: Fraction, b: Fraction) -> bool:
    return b.numerator * a.denominator - a.numerator * b.denominator == 1


def mediant(a: Fraction, b: Fraction) -> Fraction:
    """Mediant of two F-B neighbours ``a < b``.

    Raises ValueError if the pair is not unimodular; the result would not be
    in lowest terms and the tree structure breaks.
    """
    a, b = as_fraction(a), as_fraction(b)
    if not is_unimodular(a, b):
        raise ValueError(f"{a} and {b} are not adjacent in any Farey-Brocot level")
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


@dataclass(frozen=True)
class FareyInterval:
    """Closed segment between two F-B neighbours.

    ``depth`` is the partition depth: the segment is one of the ``2**depth``
    pieces of ``farey_level(depth + 1)``.
    """

    left: Fraction
    right: Fraction
    depth: int

    def __post_init__(self):
        if not is_unimodular(self.left, self.right):
            raise ValueError(f"[{self.left}, {self.right}] is not a Farey-Brocot segment")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def level(self) -> int:
        return self.depth + 1

    @property
    def length(self) -> Fraction:
        return Fraction(1, self.left.denominator * self.right.denominator)

    def mediant(self) -> Fraction:
        return mediant(self.left, self.right)

    def children(self) -> tuple["FareyInterval", "FareyInterval"]:
        m = self.mediant()
        return (FareyInterval(self.left, m, self.depth + 1),
                FareyInterval(m, self.right, self.depth + 1))

    def mirror(self) -> "FareyInterval":
        return FareyInterval(1 - self.right, 1 - self.left, self.depth)

    def __contains__(self, x) -> bool:
        return self.left <= as_fraction(x) <= self.right

    def __str__(self):
        return f"[{self.left}, {self.right}]"


ROOT = FareyInterval(ZERO, ONE, 0)


@dataclass(frozen=True)
class FareyLevel:
    depth: int
    entries: tuple[Fraction, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def segments(self) -> list[FareyInterval]:
        return [FareyInterval(a, b, self.depth - 1)
                for a, b in zip(self.entries, self.entries[1:])]


def farey_level(k: int) -> FareyLevel:
    if k < 1:
        raise ValueError("Farey-Brocot levels start at k = 1")
    if k > MAX_LISTED_LEVEL:
        raise ValueError(f"level {k} has 2**{k - 1} + 1 entries; listing is capped at "
                         f"k = {MAX_LISTED_LEVEL}, use tree descent instead")
    entries = [ZERO, ONE]
    for _ in range(k - 1):
        nxt = [entries[0]]
        for a, b in zip(entries, entries[1:]):
            nxt.append(Fraction(a.numerator + b.numerator, a.denominator + b.denominator))
            nxt.append(b)
        entries = nxt
    return FareyLevel(k, tuple(entries))


def level_segments(k: int) -> list[FareyInterval]:
    return farey_level(k).segments()


def _side(x, m: Fraction) -> int:
    """-1 if x < m, +1 if x >= m; 0 if an exact bracket straddles m."""
    if isinstance(x, tuple):
        lo, hi = x
        if hi < m:
            return -1
        if lo >= m:
            return 1
        return 0
    return -1 if x < m else 1


def _normalize_point(x):
    if isinstance(x, tuple):
        lo, hi = (as_fraction(v) for v in x)
        if lo > hi:
            raise ValueError("bracket must satisfy lo <= hi")
        return lo, hi
    return as_fraction(x)


def covering_segment(x: RealLike, k: int) -> FareyInterval:
    """Segment ``[Q/P, Q'/P')`` of ``farey_level(k)`` containing ``x``.

    ``x`` is an exact rational or an exact bracket ``(lo, hi)`` around a real
    number.  A bracket that straddles a mediant met on the way down raises
    ValueError rather than guessing.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = _normalize_point(x)
    lo, hi = x if isinstance(x, tuple) else (x, x)
    if lo < 0 or hi >= 1:
        raise ValueError("x must lie in [0, 1)")
    seg = ROOT
    for _ in range(k - 1):
        left, right = seg.children()
        side = _side(x, left.right)
        if side == 0:
            raise ValueError(f"bracket [{lo}, {hi}] straddles {left.right}; refine it")
        seg = left if side < 0 else right
    return seg


def fb_measure(seg: FareyInterval) -> Fraction:
    return Fraction(1, 2 ** seg.depth)


def subtree_fractions(seg: FareyInterval, extra_depth: int) -> list[Fraction]:
    if extra_depth < 0:
        raise ValueError("extra_depth must be >= 0")
    out = []
    frontier = [seg]
    for _ in range(extra_depth):
        nxt = []
        for s in frontier:
            a, b = s.children()
            out.append(a.right)
            nxt.extend((a, b))
        frontier = nxt
    return sorted(out)


def descent(f: Fraction) -> Iterator[tuple[FareyInterval, bool]]:
    """Walk the mediant tree towards ``f`` in (0, 1).

    Yields ``(segment, went_left)`` for every segment whose mediant is passed
    on the way; the last yielded segment is the one whose mediant equals ``f``
    (its ``went_left`` is meaningless and reported as False).
    """
    f = as_fraction(f)
    if not 0 < f < 1:
        raise ValueError("descent target must lie strictly inside (0, 1)")
    seg = ROOT
    while True:
        m = seg.mediant()
        if m == f:
            yield seg, False
            return
        went_left = f < m
        yield seg, went_left
        left, right = seg.children()
        seg = left if went_left else right


def parent_segment(f: Fraction) -> FareyInterval:
    """The segment whose mediant is ``f``; its endpoints are the F-B parents."""
    *_, (seg, _) = descent(f)
    return seg


def level_of(f: Fraction) -> int:
    """First level at which ``f`` appears (0/1 and 1/1 are level 1)."""
    f = as_fraction(f)
    if f in (ZERO, ONE):
        return 1
    return parent_segment(f).depth + 2


def tree_path(f: Fraction) -> str:
    """Left/right moves from the root to ``f`` as a string of 'L'/'R'."""
    return "".join("L" if left else "R" for _, left in list(descent(f))[:-1])


def interior_fractions(k: int) -> list[Fraction]:
    return list(farey_level(k).entries[1:-1])


def new_fractions(k: int) -> list[Fraction]:
    """Fractions first appearing at level k (k >= 2)."""
    if k < 2:
        raise ValueError("new fractions start at level 2")
    return list(farey_level(k).entries[1::2])


def ordered_by_denominator(fracs: Sequence[Fraction]) -> list[Fraction]:
    return sorted(fracs, key=lambda f: (f.denominator, f.numerator))

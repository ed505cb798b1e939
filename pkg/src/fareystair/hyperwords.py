"""Words in the modular-group generators A and P.

A word ``A^b1 P^b2 A^b3 ...`` is stored by its exponents.  The columns of
its matrix are the last two convergents ``(Q_{m-1}, P_{m-1})`` and
``(Q_m, P_m)`` of ``[b1, ..., bm]``, in that order for even ``m`` and swapped
for odd ``m`` so that the determinant stays 1.  Reading its letters after
the leading A as left/right moves through the mediant tree lands on an F-B
segment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .contfrac import PartialQuotients, continuant
from .farey import ROOT, FareyInterval


@dataclass(frozen=True)
class Matrix2:
    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(self.a * other.a + self.b * other.c,
                       self.a * other.b + self.b * other.d,
                       self.c * other.a + self.d * other.c,
                       self.c * other.b + self.d * other.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def columns(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.c), (self.b, self.d)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


IDENTITY = Matrix2(1, 0, 0, 1)
A = Matrix2(1, 0, 1, 1)
P = Matrix2(1, 1, 0, 1)


def a_power(n: int) -> Matrix2:
    return Matrix2(1, 0, n, 1)


def p_power(n: int) -> Matrix2:
    return Matrix2(1, n, 0, 1)


@dataclass(frozen=True)
class HyperbolicWord:
    """Alternating word ``A^e1 P^e2 A^e3 ...``; always starts with A."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if not exps:
            raise ValueError("a word needs at least one letter")
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be >= 1")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_letters(cls, letters: str) -> "HyperbolicWord":
        letters = letters.upper()
        if not letters or letters[0] != "A" or set(letters) - {"A", "P"}:
            raise ValueError("words are strings over {A, P} starting with A")
        return cls(tuple(len(list(g)) for _, g in itertools.groupby(letters)))

    @property
    def letters(self) -> str:
        return "".join(("A" if i % 2 == 0 else "P") * e for i, e in enumerate(self.exponents))

    def __len__(self):
        return sum(self.exponents)

    def __str__(self):
        return self.letters


def word_matrix(w: HyperbolicWord) -> Matrix2:
    m = IDENTITY
    for i, e in enumerate(w.exponents):
        m = m @ (a_power(e) if i % 2 == 0 else p_power(e))
    return m


def word_interval(w: HyperbolicWord) -> FareyInterval:
    """F-B segment of level ``len(w)``: A -> left child, P -> right child."""
    seg = ROOT
    for letter in w.letters[1:]:
        left, right = seg.children()
        seg = left if letter == "A" else right
    return seg


def interval_word(seg: FareyInterval) -> HyperbolicWord:
    """Inverse of :func:`word_interval`."""
    letters = ["A"]
    cur = ROOT
    while cur != seg:
        if cur.depth >= seg.depth:
            raise ValueError(f"{seg} is not an F-B segment")
        left, right = cur.children()
        if seg.left >= left.left and seg.right <= left.right:
            letters.append("A")
            cur = left
        else:
            letters.append("P")
            cur = right
    return HyperbolicWord.from_letters("".join(letters))


def words_of_length(n_letters: int) -> Iterator[HyperbolicWord]:
    """All ``2**(n_letters - 1)`` words starting with A, in left-to-right order."""
    if n_letters < 1:
        raise ValueError("words have at least one letter")
    for tail in itertools.product("AP", repeat=n_letters - 1):
        yield HyperbolicWord.from_letters("A" + "".join(tail))


def apply_transform(t: HyperbolicWord, pq: PartialQuotients) -> PartialQuotients:
    """Prepend the word's exponents to the digits of ``pq``."""
    if pq.rule is not None:
        raise ValueError("materialize rule-generated digits first")
    return PartialQuotients(t.exponents + pq.digits, finite=pq.finite,
                            name=f"{t.letters}*{pq.name}" if pq.name else "")


@dataclass(frozen=True)
class ScaleFactor:
    lambda_: Fraction
    theta_m: Fraction
    pm: int

    @property
    def normalized(self) -> Fraction:
        """``lambda * P_m``; lies in (1/2, 1)."""
        return self.lambda_ * self.pm

    def identity_holds(self) -> bool:
        return self.lambda_ * self.pm * (1 + self.theta_m) == 1

    def within_coarse_bounds(self) -> bool:
        return Fraction(1, 2) < self.normalized < 1

    def within_refined_bound(self) -> bool:
        """``lambda * P_m > 1/(1 + phi**-2)``, decided exactly.

        Equivalent to ``theta_m < (3 - sqrt5)/2``, i.e. ``(3 - 2 theta)**2 > 5``
        since ``3 - 2 theta > 0``.
        """
        t = self.theta_m
        return 3 - 2 * t > 0 and (3 - 2 * t) ** 2 > 5


def scale_factor(b: Sequence[int], a: Sequence[int]) -> ScaleFactor:
    """Contraction between steps ``[a]`` and ``[b; a]``.

    ``lambda = K(a) / K(b + a)`` with ``K`` the continuant, and
    ``theta_m = K(b[:-1])/K(b) * K(a[1:])/K(a)``.
    """
    b, a = list(b), list(a)
    if not b or not a:
        raise ValueError("both digit blocks must be non-empty")
    pm = continuant(b)
    lam = Fraction(continuant(a), continuant(b + a))
    theta = Fraction(continuant(b[:-1]), pm) * Fraction(continuant(a[1:]), continuant(a))
    return ScaleFactor(lam, theta, pm)

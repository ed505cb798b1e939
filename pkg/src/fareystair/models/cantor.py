"""Two-scale Cantor staircase with closed-form interval lengths.

Every gap of length ``L`` keeps a left piece ``r1 L`` and a right piece
``r2 L``; the step of the mediant fills the middle.  The inner gap is
``[0, 1]`` and the two boundary steps have unit width.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from ..farey import as_fraction, descent


class CantorModel:
    def __init__(self, r1: float, r2: float):
        if not (r1 > 0 and r2 > 0 and r1 + r2 < 1):
            raise ValueError("need r1, r2 > 0 and r1 + r2 < 1")
        self.r1, self.r2 = float(r1), float(r2)
        self.model_id = f"cantor(r1={self.r1!r},r2={self.r2!r})"

    def _gap(self, f: Fraction) -> tuple[float, float]:
        """Gap whose middle is the step of ``f``."""
        lo, hi = 0.0, 1.0
        for seg, went_left in descent(f):
            if seg.mediant() == f:
                return lo, hi
            length = hi - lo
            if went_left:
                hi = lo + self.r1 * length
            else:
                lo = hi - self.r2 * length
        raise AssertionError("unreachable")

    def step_position(self, f: Fraction) -> tuple[float, float]:
        f = as_fraction(f)
        if f == 0:
            return -1.0, 0.0
        if f == 1:
            return 1.0, 2.0
        lo, hi = self._gap(f)
        length = hi - lo
        return lo + self.r1 * length, hi - self.r2 * length

    def step_width(self, f: Fraction) -> float:
        a, b = self.step_position(f)
        return b - a

    def gap_length(self, left: Fraction, right: Fraction) -> float:
        left, right = as_fraction(left), as_fraction(right)
        length = 1.0
        if (left, right) == (0, 1):
            return length
        target = Fraction(left.numerator + right.numerator, left.denominator + right.denominator)
        for seg, went_left in descent(target):
            if seg.mediant() == target:
                break
            length *= self.r1 if went_left else self.r2
        else:
            raise AssertionError("unreachable")
        return length

    def domain_bounds(self) -> tuple[float, float]:
        return -1.0, 2.0

    def prefetch(self, fractions: Sequence[Fraction]) -> None:
        return None

    def dimension(self) -> float:
        """Similarity dimension: ``r1**D + r2**D = 1``."""
        if self.r1 == self.r2:
            return math.log(2) / -math.log(self.r1)
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.r1 ** mid + self.r2 ** mid > 1:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def ternary() -> CantorModel:
    return CantorModel(1 / 3, 1 / 3)

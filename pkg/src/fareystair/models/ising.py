"""Ising magnetization staircase: step widths ``(gamma P)**-(a+1)``.

Widths depend only on the denominator.  Positions on the field axis are
measured from the right edge of the ``0/1`` step.  The total width of all
steps strictly between two F-B neighbours ``Q/P < Q'/P'`` is

    gamma**-s * sum_{m,n >= 1, gcd(m,n) = 1} (mP + nP')**-s,   s = a + 1,

and the coprimality sieve turns the double sum into ``T(P, P') / zeta(s)``
with ``T`` an unrestricted double sum.  ``T`` is evaluated as a sum of
Hurwitz zeta values with an Euler-Maclaurin remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import zeta

from ..farey import as_fraction, descent

HURWITZ_TERMS = 2000


@dataclass(frozen=True)
class IsingParams:
    a: float = 1.5
    gamma: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")

    @property
    def s(self) -> float:
        return self.a + 1.0

    @property
    def summable(self) -> bool:
        return self.a > 1


def ising_step_width(p: IsingParams, f: Fraction) -> float:
    return (p.gamma * as_fraction(f).denominator) ** -p.s


@lru_cache(maxsize=1 << 16)
def _lattice_sum(p: int, pp: int, s: float, terms: int = HURWITZ_TERMS) -> float:
    """``sum_{m,n >= 1} (m p + n pp)**-s`` for ``s > 2``."""
    c = p / pp
    m = np.arange(1, terms + 1)
    body = math.fsum(zeta(s, 1.0 + m * c))
    x0 = terms + 1 + 1.0 / c
    tail = (c ** (1 - s) * zeta(s - 1, x0) / (s - 1)
            + 0.5 * c ** -s * zeta(s, x0)
            + s / 12 * c ** (-s - 1) * zeta(s + 1, x0)
            - s * (s + 1) * (s + 2) / 720 * c ** (-s - 3) * zeta(s + 3, x0))
    return float(pp ** -s * (body + tail))


def ising_gap_sum(p: IsingParams, left: Fraction, right: Fraction) -> float:
    """Total step width strictly between the F-B neighbours ``left < right``."""
    if not p.summable:
        raise ValueError(f"a = {p.a} <= 1: infinitely many steps of divergent total width")
    left, right = as_fraction(left), as_fraction(right)
    lo, hi = sorted((left.denominator, right.denominator))
    return float(p.gamma ** -p.s * _lattice_sum(lo, hi, p.s) / zeta(p.s))


def ising_inner_length(p: IsingParams) -> float:
    """Width of everything strictly between the 0/1 and 1/1 steps."""
    if not p.summable:
        raise ValueError(f"a = {p.a} <= 1: infinitely many steps of divergent total width")
    return p.gamma ** -p.s * (float(zeta(p.a)) / float(zeta(p.s)) - 1.0)


def _x_left_exact(p: IsingParams, f: Fraction) -> float:
    total = 0.0
    for seg, went_left in descent(f):
        m = seg.mediant()
        if m == f:
            total += ising_gap_sum(p, seg.left, m)
        elif not went_left:
            total += ising_gap_sum(p, seg.left, m) + ising_step_width(p, m)
    return total


def ising_domain_position(p: IsingParams, f: Fraction, p_max: int) -> tuple[float, float, float]:
    """Step edges of ``f`` by enumerating all heights with denominator <= p_max.

    Returns ``(x_left, x_right, tail_bound)``; the true edges exceed the
    returned ones by at most ``tail_bound``.
    """
    f = as_fraction(f)
    if not p.summable:
        raise ValueError(f"a = {p.a} <= 1: the staircase has divergent total width")
    if not 0 < f < 1:
        raise ValueError("f must lie in (0, 1)")
    if p_max < f.denominator:
        raise ValueError("p_max must be at least the denominator of f")
    parts = []
    for den in range(2, p_max + 1):
        q = np.arange(1, den)
        below = q[(q * f.denominator < f.numerator * den) & (np.gcd(q, den) == 1)]
        if below.size:
            parts.append(below.size * (p.gamma * den) ** -p.s)
    x_left = math.fsum(parts)
    tail = p.gamma ** -p.s * p_max ** (1 - p.a) / (p.a - 1)
    return x_left, x_left + ising_step_width(p, f), tail


class IsingModel:
    """Analytic staircase; exact positions need ``a > 1``."""

    def __init__(self, params: IsingParams = IsingParams()):
        self.params = params
        self.model_id = f"ising(a={params.a!r},gamma={params.gamma!r})"

    def step_width(self, f: Fraction) -> float:
        return ising_step_width(self.params, f)

    def gap_length(self, left: Fraction, right: Fraction) -> float:
        return ising_gap_sum(self.params, left, right)

    def step_position(self, f: Fraction) -> tuple[float, float]:
        f = as_fraction(f)
        if f == 0:
            return -self.step_width(f), 0.0
        inner = ising_inner_length(self.params)
        if f == 1:
            return inner, inner + self.step_width(f)
        x = float(_x_left_exact(self.params, f))
        return x, x + self.step_width(f)

    def domain_bounds(self) -> tuple[float, float]:
        w = self.step_width(Fraction(0))
        return -w, ising_inner_length(self.params) + w

    def prefetch(self, fractions: Sequence[Fraction]) -> None:
        return None

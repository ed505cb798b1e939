"""Regressions comparing staircase geometry with F-B geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .farey import FareyInterval
from .models.base import NonConverged, StaircaseModel
from .omega import omega_approx


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    n_points: int
    residual_max: float


def least_squares(x: Sequence[float], y: Sequence[float]) -> FitResult:
    """Ordinary least squares with intercept."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.size != y.size or x.size < 2:
        raise ValueError("need at least two (x, y) pairs")
    xm, ym = x.mean(), y.mean()
    sxx = np.dot(x - xm, x - xm)
    if sxx == 0:
        raise ValueError("x values are all equal")
    slope = float(np.dot(x - xm, y - ym) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.dot(y - ym, y - ym))
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, int(x.size), float(np.abs(resid).max()))


class MissingWidths(ValueError):
    def __init__(self, missing: Sequence[Fraction]):
        self.missing = list(missing)
        super().__init__("no width for " + ", ".join(f"({f.numerator},{f.denominator})" for f in self.missing))


def heights_with_denominator(p: int) -> list[Fraction]:
    if p == 1:
        return [Fraction(0), Fraction(1)]
    return [Fraction(q, p) for q in range(1, p) if math.gcd(q, p) == 1]


@dataclass(frozen=True)
class Fig1Result:
    fit: FitResult
    rows: tuple[tuple[int, float], ...]


def fig1_regression(model: StaircaseModel, p_max: int) -> Fig1Result:
    """Fit ``ln(mean width at P)`` against ``ln P`` for ``P = 1..p_max``."""
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    heights = [f for p in range(1, p_max + 1) for f in heights_with_denominator(p)]
    try:
        model.prefetch(heights)
    except NonConverged:
        pass
    missing, rows = [], []
    for p in range(1, p_max + 1):
        widths = []
        for f in heights_with_denominator(p):
            try:
                widths.append(model.step_width(f))
            except NonConverged:
                missing.append(f)
        if widths:
            rows.append((p, math.fsum(widths) / len(widths)))
    if missing:
        raise MissingWidths(missing)
    fit = least_squares([math.log(p) for p, _ in rows], [math.log(w) for _, w in rows])
    return Fig1Result(fit, tuple(rows))


@dataclass(frozen=True)
class SizePoint:
    label: FareyInterval
    omega_length: float
    fb_length: float


@dataclass(frozen=True)
class SizesResult:
    depth: int
    fit: FitResult
    points: tuple[SizePoint, ...]


def sizes_regression(model: StaircaseModel, k: int) -> SizesResult:
    """Regress the F-B label length ``1/(P P')`` on the length of each depth-``k`` gap."""
    approx = omega_approx(model, k)
    points = tuple(SizePoint(iv.label, iv.length, float(iv.label.length)) for iv in approx.intervals)
    fit = least_squares([p.omega_length for p in points], [p.fb_length for p in points])
    return SizesResult(k, fit, points)


def mirror_deviation(points: Sequence[SizePoint]) -> float:
    """Largest gap-length difference between a label and its mirror image."""
    by_label = {(p.label.left, p.label.right): p.omega_length for p in points}
    worst = 0.0
    for p in points:
        m = p.label.mirror()
        worst = max(worst, abs(p.omega_length - by_label[(m.left, m.right)]))
    return worst


def distinct_points(points: Sequence[SizePoint], tol: float) -> int:
    seen: list[tuple[float, float]] = []
    for p in sorted(points, key=lambda p: (p.fb_length, p.omega_length)):
        if not any(abs(p.fb_length - y) <= tol and abs(p.omega_length - x) <= tol for x, y in seen):
            seen.append((p.omega_length, p.fb_length))
    return len(seen)


@dataclass(frozen=True)
class SlopeLaw:
    entries: tuple[tuple[int, float], ...]
    linear_fit: FitResult
    inner_fits: tuple[SizesResult, ...]
    flagged: tuple[int, ...]


def slope_law(model: StaircaseModel, k_range: Sequence[int], r2_floor: float = 0.9) -> SlopeLaw:
    ks = sorted(k_range)
    if len(ks) < 2:
        raise ValueError("a slope law needs at least two depths")
    if ks[0] < 2 or ks != list(range(ks[0], ks[-1] + 1)):
        raise ValueError("depths must be contiguous and start at 2 or more")
    fits = tuple(sizes_regression(model, k) for k in ks)
    entries = tuple((r.depth, r.fit.slope) for r in fits)
    law = least_squares([k for k, _ in entries], [m for _, m in entries])
    flagged = tuple(r.depth for r in fits if r.fit.r2 < r2_floor)
    return SlopeLaw(entries, law, fits, flagged)

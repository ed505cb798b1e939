"""Finite approximations of the Cantor dust and their multifractal spectrum.

At depth ``k`` the dust is covered by ``2**k`` gaps, one per segment of
``farey_level(k + 1)``, each carrying measure ``2**-k``.  Lengths enter the
spectrum relative to the inner gap ``I^0`` so that the cover starts from a
unit interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .contfrac import PartialQuotients, bracket
from .farey import ONE, ZERO, FareyInterval, as_fraction, covering_segment, level_segments
from .models.base import NonConverged, StaircaseModel

LN2 = math.log(2.0)
TAU_RESIDUAL = 1e-12


@dataclass(frozen=True)
class OmegaInterval:
    label: FareyInterval
    length: float


@dataclass(frozen=True)
class OmegaApprox:
    depth: int
    intervals: tuple[OmegaInterval, ...]
    domain_length: float
    model_id: str

    def __post_init__(self):
        if len(self.intervals) != 2 ** self.depth:
            raise ValueError(f"depth {self.depth} needs {2 ** self.depth} intervals")
        if any(not iv.length > 0 for iv in self.intervals):
            raise ValueError("interval lengths must be positive")

    @classmethod
    def from_lengths(cls, depth: int, lengths: Sequence[float], domain_length: float = 1.0,
                     model_id: str = "synthetic") -> "OmegaApprox":
        labels = level_segments(depth + 1)
        return cls(depth, tuple(OmegaInterval(s, float(l)) for s, l in zip(labels, lengths, strict=True)),
                   float(domain_length), model_id)

    @property
    def measure(self) -> float:
        return 2.0 ** -self.depth

    @property
    def lengths(self) -> np.ndarray:
        return np.array([iv.length for iv in self.intervals])

    @property
    def scaled_lengths(self) -> np.ndarray:
        return self.lengths / self.domain_length

    def total_length(self) -> float:
        return math.fsum(iv.length for iv in self.intervals)

    def index_of(self, label: FareyInterval) -> int:
        for i, iv in enumerate(self.intervals):
            if (iv.label.left, iv.label.right) == (label.left, label.right):
                return i
        raise KeyError(str(label))


def omega_approx(model: StaircaseModel, k: int) -> OmegaApprox:
    """Remove the steps of ``farey_level(k + 1)`` from the inner gap of the staircase."""
    if k < 0:
        raise ValueError("depth must be >= 0")
    labels = level_segments(k + 1)
    heights = sorted({s.left for s in labels} | {ONE})
    model.prefetch(heights)
    bad = []
    lengths = []
    for seg in labels:
        try:
            lengths.append(model.gap_length(seg.left, seg.right))
        except NonConverged as exc:
            bad.extend(exc.fractions)
    try:
        domain = model.gap_length(ZERO, ONE)
    except NonConverged as exc:
        bad.extend(exc.fractions)
    if bad:
        raise NonConverged(bad)
    return OmegaApprox(k, tuple(OmegaInterval(s, l) for s, l in zip(labels, lengths)),
                       domain, model.model_id)


def removed_width(model: StaircaseModel, k: int) -> float:
    """Total width of the steps removed from the inner gap up to depth ``k``."""
    if k < 1:
        return 0.0
    heights = [s.right for s in level_segments(k + 1)[:-1]]
    return math.fsum(model.step_width(f) for f in heights)


def alpha_index(approx: OmegaApprox, i: int) -> float:
    length = approx.scaled_lengths[i]
    if length >= 1:
        raise ValueError(f"interval {i} has scaled length {length} >= 1; alpha undefined")
    return -approx.depth * LN2 / math.log(length)


def _log_partition(log_l: np.ndarray, log_p: float, q: float, tau: float) -> float:
    terms = q * log_p - tau * log_l
    top = terms.max()
    return float(top + math.log(np.exp(terms - top).sum()))


def tau_of_q(approx: OmegaApprox, q: float) -> float:
    """The ``tau`` with ``sum_i p_i**q * l_i**-tau = 1``, by bisection."""
    log_l = np.log(approx.scaled_lengths)
    if np.any(log_l >= 0):
        raise ValueError("all scaled lengths must lie in (0, 1)")
    log_p = -approx.depth * LN2
    if approx.depth == 0:
        raise ValueError("depth 0 has a single interval of scaled length 1")
    g = lambda t: _log_partition(log_l, log_p, q, t)  # noqa: E731 - increasing in t
    lo, hi = -1.0, 1.0
    while g(lo) > 0:
        lo *= 2
    while g(hi) < 0:
        hi *= 2
    while True:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    tau = lo if abs(g(lo)) <= abs(g(hi)) else hi
    if abs(math.expm1(g(tau))) > TAU_RESIDUAL:
        raise ArithmeticError(f"tau({q}) residual {math.expm1(g(tau))} above {TAU_RESIDUAL}")
    return tau


@dataclass(frozen=True)
class SpectrumPoint:
    q: float
    tau: float
    alpha: float
    f: float


def spectrum_point(approx: OmegaApprox, q: float) -> SpectrumPoint:
    tau = tau_of_q(approx, q)
    log_l = np.log(approx.scaled_lengths)
    log_p = -approx.depth * LN2
    terms = q * log_p - tau * log_l
    w = np.exp(terms - terms.max())
    alpha = float(log_p * w.sum() / np.dot(w, log_l))
    return SpectrumPoint(q, tau, alpha, q * alpha - tau)


def default_q_grid(n: int = 81, q_max: float = 20.0, clustering: float = 3.0) -> list[float]:
    t = np.linspace(-1.0, 1.0, n)
    q = q_max * np.sinh(clustering * t) / math.sinh(clustering)
    return [float(v) for v in q]


def spectrum(approx: OmegaApprox, q_grid: Optional[Sequence[float]] = None) -> list[SpectrumPoint]:
    grid = default_q_grid() if q_grid is None else list(q_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("q_grid must be strictly increasing")
    return [spectrum_point(approx, q) for q in grid]


def alpha_by_difference(approx: OmegaApprox, q: float, h: float = 1e-4) -> float:
    return (tau_of_q(approx, q + h) - tau_of_q(approx, q - h)) / (2 * h)


def dimension_estimate(approx: OmegaApprox) -> float:
    return -tau_of_q(approx, 0.0)


@dataclass(frozen=True)
class SpectrumShape:
    depth: int
    alpha_min: float
    alpha_max: float
    alpha_at_peak: float
    f_peak: float
    f_at_alpha_min: float
    increasing_fraction: float

    @property
    def peak_gap_ratio(self) -> float:
        """``(alpha_max - alpha at max f) / (alpha_max - alpha_min)``."""
        return (self.alpha_max - self.alpha_at_peak) / (self.alpha_max - self.alpha_min)


def spectrum_shape(points: Sequence[SpectrumPoint], depth: int) -> SpectrumShape:
    """Finite-depth surrogates for the spectrum's endpoints and its rising part."""
    pts = sorted(points, key=lambda p: p.alpha)
    a = np.array([p.alpha for p in pts])
    f = np.array([p.f for p in pts])
    span = a[-1] - a[0]
    rising = float(np.sum(np.diff(a)[np.diff(f) > 0])) / span if span > 0 else 0.0
    peak = int(np.argmax(f))
    by_q = sorted(points, key=lambda p: p.q)
    return SpectrumShape(depth, by_q[-1].alpha, by_q[0].alpha, float(a[peak]), float(f[peak]),
                         by_q[-1].f, rising)


Target = Union[Fraction, PartialQuotients]


def covering_label(target: Target, level: int) -> FareyInterval:
    """Left-closed covering segment of ``farey_level(level)``; irrationals are bracketed exactly."""
    if isinstance(target, PartialQuotients):
        n = 2
        while True:
            lo, hi = bracket(target, n)
            try:
                return covering_segment((lo, hi), level)
            except ValueError:
                n += 1
                if n > 4 * level + 8:
                    raise
    return covering_segment(as_fraction(target), level)


def alpha_along(approxes: Sequence[OmegaApprox], target: Target) -> list[tuple[int, float]]:
    """``(k, alpha)`` of the depth-``k`` interval covering the image of ``target``."""
    if not isinstance(target, PartialQuotients):
        t = as_fraction(target)
        if t in (ZERO, ONE):
            raise ValueError("target must lie strictly inside (0, 1)")
    out = []
    for approx in sorted(approxes, key=lambda a: a.depth):
        if approx.depth < 1:
            continue
        label = covering_label(target, approx.depth + 1)
        out.append((approx.depth, alpha_index(approx, approx.index_of(label))))
    return out

"""Critical sine circle map and its mode-locking intervals.

A rotation number ``Q/P`` is locked at ``omega`` iff the displacement
``h(t) = f^P(t) - t - Q`` of the lift changes sign over one period of ``t``.
Both ``max h`` and ``min h`` increase with ``omega``; the left edge of the
tongue is the zero of ``max h`` and the right edge the zero of ``min h``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..farey import as_fraction, parent_segment
from .base import NonConverged
from .cache import LockCache

TWO_PI = 2.0 * math.pi
INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FALLBACK_HALF_WIDTH = 0.2
MAX_EXPANSIONS = 8


@dataclass(frozen=True)
class CircleSolverConfig:
    omega_tol: float = 1e-10
    phase_grid: int = 256
    refine_iters: int = 60
    max_period: int = 4096

    def __post_init__(self):
        if not self.omega_tol > 0:
            raise ValueError("omega_tol must be positive")
        if self.phase_grid < 64:
            raise ValueError("phase_grid must be >= 64")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if self.max_period < 1:
            raise ValueError("max_period must be >= 1")


@dataclass(frozen=True)
class LockingInterval:
    height: Fraction
    omega_minus: float
    omega_plus: float
    converged: bool = True
    residual: float = float("nan")

    @property
    def width(self) -> float:
        return self.omega_plus - self.omega_minus


def circle_map_step(phase, omega):
    return phase + omega + np.sin(TWO_PI * phase) / TWO_PI


def _iterate(phase, omega, n: int):
    t = phase
    for _ in range(n):
        t = t + omega + np.sin(TWO_PI * t) / TWO_PI
    return t


def winding_number(omega, n_iter: int = 10_000, transient: int = 1_000, phase: float = 0.0):
    """Mean rotation per iterate; accepts a scalar or an array of omegas."""
    if n_iter < 1000:
        raise ValueError("n_iter must be >= 1000")
    w = np.asarray(omega, dtype=float)
    frac = np.full(w.shape, float(phase))
    turns = np.zeros(w.shape)
    for i in range(transient + n_iter):
        if i == transient:
            turns[...] = 0.0
            start = frac.copy()
        nxt = frac + w + np.sin(TWO_PI * frac) / TWO_PI
        whole = np.floor(nxt)
        frac = nxt - whole
        turns += whole
    out = (turns + frac - start) / n_iter
    return float(out) if out.ndim == 0 else out


def _extremum(omega: float, q: int, p: int, cfg: CircleSolverConfig, sign: float) -> float:
    """``sign * max(sign * h)`` over one period: grid, then golden-section per local peak."""
    n = max(cfg.phase_grid, 16 * p)
    t = np.arange(n) / n
    hs = sign * (_iterate(t, omega, p) - t - q)
    peaks = np.flatnonzero((hs >= np.roll(hs, 1)) & (hs >= np.roll(hs, -1)))
    best = hs.max()
    if cfg.refine_iters and peaks.size:
        a, b = t[peaks] - 1.0 / n, t[peaks] + 1.0 / n
        c, d = b - INV_GOLDEN * (b - a), a + INV_GOLDEN * (b - a)
        hc = sign * (_iterate(c, omega, p) - c - q)
        hd = sign * (_iterate(d, omega, p) - d - q)
        for _ in range(cfg.refine_iters):
            left = hc > hd
            b = np.where(left, d, b)
            a = np.where(left, a, c)
            c, d = b - INV_GOLDEN * (b - a), a + INV_GOLDEN * (b - a)
            hc = sign * (_iterate(c, omega, p) - c - q)
            hd = sign * (_iterate(d, omega, p) - d - q)
        best = max(best, hc.max(), hd.max())
    return sign * float(best)


def _check_period(f: Fraction, cfg: CircleSolverConfig) -> None:
    if f.denominator > cfg.max_period:
        raise ValueError(f"period {f.denominator} of {f} exceeds max_period={cfg.max_period}")


def displacement_range(omega: float, f: Fraction, cfg: CircleSolverConfig) -> tuple[float, float]:
    f = as_fraction(f)
    _check_period(f, cfg)
    q, p = f.numerator, f.denominator
    return _extremum(omega, q, p, cfg, -1.0), _extremum(omega, q, p, cfg, 1.0)


def locking_test(omega: float, f: Fraction, cfg: CircleSolverConfig = CircleSolverConfig()) -> float:
    """Signed margin, ``>= 0`` iff ``Q/P`` is locked at ``omega``."""
    lo, hi = displacement_range(omega, f, cfg)
    return min(hi, -lo)


def _edge(fn, lo: float, hi: float, tol: float) -> tuple[float, bool, float]:
    width = hi - lo
    flo, fhi = fn(lo), fn(hi)
    for _ in range(MAX_EXPANSIONS):
        if flo < 0 < fhi:
            break
        if not flo < 0:
            lo -= width
            flo = fn(lo)
        if not fhi > 0:
            hi += width
            fhi = fn(hi)
        width *= 2
    else:
        return float("nan"), False, float("nan")
    root, info = brentq(fn, lo, hi, xtol=tol, full_output=True, disp=False)
    return float(root), bool(info.converged), abs(fn(root))


def locking_interval(f: Fraction, cfg: CircleSolverConfig = CircleSolverConfig(),
                     bracket: Optional[tuple[float, float]] = None) -> LockingInterval:
    """Edges of the tongue of ``f`` to ``cfg.omega_tol``.

    ``bracket`` should be ``(omega_plus(left parent), omega_minus(right parent))``;
    without it a fixed window around ``f`` is searched.
    """
    f = as_fraction(f)
    _check_period(f, cfg)
    q, p = f.numerator, f.denominator
    lo, hi = bracket if bracket else (float(f) - FALLBACK_HALF_WIDTH, float(f) + FALLBACK_HALF_WIDTH)
    wm, ok_m, res_m = _edge(lambda w: _extremum(w, q, p, cfg, 1.0), lo, hi, cfg.omega_tol)
    wp, ok_p, res_p = _edge(lambda w: _extremum(w, q, p, cfg, -1.0), lo, hi, cfg.omega_tol)
    converged = ok_m and ok_p and wm < wp
    return LockingInterval(f, wm, wp, converged, max(res_m, res_p))


def _solve(args) -> LockingInterval:
    f, cfg, bracket = args
    return locking_interval(f, cfg, bracket)


def _parents(f: Fraction) -> Optional[tuple[Fraction, Fraction]]:
    if f in (0, 1):
        return None
    seg = parent_segment(f)
    return seg.left, seg.right


class CircleMapModel:
    """Tongues computed on demand, bracketed by their F-B parents, memoized and cached."""

    def __init__(self, cfg: CircleSolverConfig = CircleSolverConfig(),
                 cache: Optional[LockCache] = None, jobs: int = 1):
        self.cfg = cfg
        self.cache = cache
        self.jobs = max(1, int(jobs))
        self.model_id = (f"circle(omega_tol={cfg.omega_tol!r},phase_grid={cfg.phase_grid},"
                         f"refine_iters={cfg.refine_iters})")
        self._known: dict[Fraction, LockingInterval] = {}
        if cache is not None:
            for f, (wm, wp) in cache.load().items():
                self._known[f] = LockingInterval(f, wm, wp)

    def _closure(self, fractions: Sequence[Fraction]) -> dict[Fraction, int]:
        """Generation of every missing fraction together with its missing ancestors."""
        gen: dict[Fraction, int] = {}

        def visit(f: Fraction) -> int:
            if f in self._known:
                return -1
            if f in gen:
                return gen[f]
            stack = [f]
            while stack:
                g = stack[-1]
                par = _parents(g)
                todo = [x for x in (par or ()) if x not in self._known and x not in gen]
                if todo:
                    stack.extend(todo)
                    continue
                stack.pop()
                gen[g] = 0 if par is None else 1 + max(gen.get(x, -1) for x in par)
            return gen[f]

        for f in fractions:
            visit(as_fraction(f))
        return gen

    def _bracket(self, f: Fraction) -> Optional[tuple[float, float]]:
        par = _parents(f)
        if par is None:
            return None
        left, right = (self._known[x] for x in par)
        if not (left.converged and right.converged):
            return None
        return left.omega_plus, right.omega_minus

    def prefetch(self, fractions: Sequence[Fraction]) -> None:
        gen = self._closure(fractions)
        if not gen:
            return
        if self.cache is not None:
            self.cache.misses += len(gen)
        pool = ProcessPoolExecutor(self.jobs) if self.jobs > 1 and len(gen) > 1 else None
        try:
            for g in range(max(gen.values()) + 1):
                batch = sorted((f for f, v in gen.items() if v == g),
                               key=lambda f: (f.denominator, f.numerator))
                args = [(f, self.cfg, self._bracket(f)) for f in batch]
                results = list(pool.map(_solve, args)) if pool else [_solve(a) for a in args]
                for r in results:
                    self._known[r.height] = r
                if self.cache is not None:
                    self.cache.append((r.height, r.omega_minus, r.omega_plus)
                                      for r in results if r.converged)
        finally:
            if pool:
                pool.shutdown()

    def interval(self, f: Fraction) -> LockingInterval:
        f = as_fraction(f)
        if f not in self._known:
            self.prefetch([f])
        elif self.cache is not None:
            self.cache.hits += 1
        return self._known[f]

    def _converged(self, f: Fraction) -> LockingInterval:
        r = self.interval(f)
        if not r.converged:
            raise NonConverged([f])
        return r

    def step_width(self, f: Fraction) -> float:
        return self._converged(f).width

    def step_position(self, f: Fraction) -> tuple[float, float]:
        r = self._converged(f)
        return r.omega_minus, r.omega_plus

    def gap_length(self, left: Fraction, right: Fraction) -> float:
        return self._converged(right).omega_minus - self._converged(left).omega_plus

    def domain_bounds(self) -> tuple[float, float]:
        return self._converged(Fraction(0)).omega_minus, self._converged(Fraction(1)).omega_plus

    def unresolved(self, fractions: Sequence[Fraction]) -> list[Fraction]:
        self.prefetch(fractions)
        return [f for f in map(as_fraction, fractions) if not self._known[f].converged]

"""Persistent store of locking intervals.

One JSON array per line: ``[Q, P, omega_minus, omega_plus, omega_tol,
phase_grid, refine_iters]``.  A file only ever holds records of a single
solver configuration; finding another one is an error, not a miss.
"""

from __future__ import annotations

import fcntl
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Iterable

CACHE_ENV = "FAREYSTAIR_CACHE"


class CacheConfigMismatch(RuntimeError):
    pass


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "fareystair" / "locking.jsonl"


class LockCache:
    def __init__(self, path, omega_tol: float, phase_grid: int, refine_iters: int):
        self.path = Path(path)
        self.config = (float(omega_tol), int(phase_grid), int(refine_iters))
        self.hits = 0
        self.misses = 0

    def load(self) -> dict[Fraction, tuple[float, float]]:
        if not self.path.exists():
            return {}
        out = {}
        with open(self.path, encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                text = fh.read()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        for lineno, line in enumerate(text.split("\n"), 1):
            if not line.strip():
                continue
            try:
                q, p, wm, wp, tol, grid, iters = json.loads(line)
            except ValueError:
                # a torn final line from an interrupted writer
                if lineno == text.count("\n") + 1:
                    break
                raise
            if (float(tol), int(grid), int(iters)) != self.config:
                raise CacheConfigMismatch(
                    f"{self.path}:{lineno} was written with omega_tol={tol}, phase_grid={grid}, "
                    f"refine_iters={iters}; current run uses {self.config}")
            out[Fraction(q, p)] = (float(wm), float(wp))
        return out

    def append(self, records: Iterable[tuple[Fraction, float, float]]) -> None:
        lines = "".join(
            json.dumps([f.numerator, f.denominator, wm, wp, *self.config]) + "\n"
            for f, wm, wp in records)
        if not lines:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(lines)
                fh.flush()
                os.fsync(fh.fileno())
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

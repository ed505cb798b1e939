"""Common interface of the staircase generators and staircase sampling."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from ..farey import farey_level


class NonConverged(RuntimeError):
    """A step could not be located; ``fractions`` lists the offenders."""

    def __init__(self, fractions: Sequence[Fraction], detail: str = ""):
        self.fractions = sorted(set(fractions), key=lambda f: (f.denominator, f.numerator))
        listed = ", ".join(str(f) for f in self.fractions)
        super().__init__(f"no converged locking interval for {listed}" + (f" ({detail})" if detail else ""))


@runtime_checkable
class StaircaseModel(Protocol):
    model_id: str

    def step_width(self, f: Fraction) -> float: ...

    def step_position(self, f: Fraction) -> tuple[float, float]: ...

    def gap_length(self, left: Fraction, right: Fraction) -> float:
        """Length of the part of the domain strictly between two F-B neighbour steps."""
        ...

    def domain_bounds(self) -> tuple[float, float]: ...

    def prefetch(self, fractions: Sequence[Fraction]) -> None: ...


@dataclass(frozen=True)
class Step:
    height: Fraction
    x_left: float
    x_right: float

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


@dataclass(frozen=True)
class StaircaseSample:
    steps: tuple[Step, ...]
    x: np.ndarray
    g: np.ndarray


def assemble_staircase(model: StaircaseModel, depth: int, resolution: int = 2001) -> StaircaseSample:
    """Steps of ``farey_level(depth)`` placed on the x axis, plus a sampled g(x).

    Between two listed steps g keeps the lower height, so the sample is
    monotone and flat on each step.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    heights = list(farey_level(depth))
    model.prefetch(heights)
    steps = tuple(Step(h, *model.step_position(h)) for h in heights)
    for s, t in zip(steps, steps[1:]):
        if not s.x_right <= t.x_left:
            raise ValueError(f"steps {s.height} and {t.height} overlap")
    lo, hi = model.domain_bounds()
    x = np.linspace(lo, hi, resolution)
    lefts = np.array([s.x_left for s in steps])
    idx = np.clip(np.searchsorted(lefts, x, side="right") - 1, 0, len(steps) - 1)
    g = np.array([float(steps[i].height) for i in idx])
    return StaircaseSample(steps, x, g)

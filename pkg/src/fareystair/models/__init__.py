from .base import NonConverged, StaircaseModel, Step, StaircaseSample, assemble_staircase
from .cache import CACHE_ENV, CacheConfigMismatch, LockCache, default_cache_path
from .cantor import CantorModel, ternary
from .circle import (CircleMapModel, CircleSolverConfig, LockingInterval, circle_map_step,
                     locking_interval, locking_test, winding_number)
from .ising import (IsingModel, IsingParams, ising_domain_position, ising_gap_sum,
                    ising_inner_length, ising_step_width)

__all__ = [
    "NonConverged", "StaircaseModel", "Step", "StaircaseSample", "assemble_staircase",
    "CACHE_ENV", "CacheConfigMismatch", "LockCache", "default_cache_path",
    "CantorModel", "ternary",
    "CircleMapModel", "CircleSolverConfig", "LockingInterval", "circle_map_step",
    "locking_interval", "locking_test", "winding_number",
    "IsingModel", "IsingParams", "ising_domain_position", "ising_gap_sum",
    "ising_inner_length", "ising_step_width",
]

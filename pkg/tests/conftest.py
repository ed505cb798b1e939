import os
from pathlib import Path

import pytest

from fareystair.models import CACHE_ENV, CircleMapModel, CircleSolverConfig, LockCache

REPO = Path(__file__).resolve().parents[1]
os.environ.setdefault(CACHE_ENV, str(REPO / ".cache" / "locking.jsonl"))

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def circle_cfg():
    return CircleSolverConfig()


@pytest.fixture(scope="session")
def circle_model(circle_cfg):
    cache = LockCache(os.environ[CACHE_ENV], circle_cfg.omega_tol, circle_cfg.phase_grid,
                      circle_cfg.refine_iters)
    return CircleMapModel(circle_cfg, cache)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])

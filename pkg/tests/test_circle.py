import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fareystair.farey import farey_level, new_fractions
from fareystair.models import (CacheConfigMismatch, CircleMapModel, CircleSolverConfig, LockCache,
                               LockingInterval, NonConverged, assemble_staircase, circle_map_step,
                               locking_interval, locking_test, winding_number)
from fareystair.omega import omega_approx

TWO_PI = 2 * math.pi


@pytest.mark.parametrize("phase, omega, out", [(0.0, 0.0, 0.0), (0.25, 0.0, 0.25 + 1 / TWO_PI)])
def test_map_step(phase, omega, out):
    assert circle_map_step(phase, omega) == pytest.approx(out, abs=1e-15)


@given(st.floats(-5, 5), st.floats(-1, 2))
def test_lift_commutes_with_unit_translation(phase, omega):
    assert circle_map_step(phase + 1, omega) == pytest.approx(circle_map_step(phase, omega) + 1, abs=1e-12)


@pytest.mark.parametrize("omega, w", [(0.0, 0.0), (1.0, 1.0), (0.5, 0.5)])
def test_winding_number_examples(omega, w):
    assert winding_number(omega, 2000) == pytest.approx(w, abs=1e-12)


def test_winding_number_rejects_short_runs():
    with pytest.raises(ValueError):
        winding_number(0.3, 100)


def test_winding_number_monotone():
    omegas = np.linspace(0.0, 1.0, 401)
    w = winding_number(omegas, 3000, 500)
    assert np.all(np.diff(w) >= -10 / 3000)


@pytest.mark.parametrize("omega, f, locked", [(0.0, F(0), True), (0.2, F(0), False), (0.5, F(1, 2), True),
                                              (0.3, F(1, 2), False)])
def test_locking_test_sign(omega, f, locked):
    assert (locking_test(omega, f) >= 0) is locked


def test_period_limit():
    cfg = CircleSolverConfig(max_period=10)
    with pytest.raises(ValueError):
        locking_test(0.5, F(1, 11), cfg)
    with pytest.raises(ValueError):
        locking_interval(F(1, 11), cfg)


@pytest.mark.parametrize("bad", [dict(omega_tol=0), dict(phase_grid=32), dict(refine_iters=-1)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        CircleSolverConfig(**bad)


def test_zero_tongue_is_analytic(circle_model):
    r = circle_model.interval(F(0))
    assert abs(r.omega_minus + 1 / TWO_PI) < 1e-9 and abs(r.omega_plus - 1 / TWO_PI) < 1e-9
    assert r.width == pytest.approx(1 / math.pi, abs=2e-9)
    one = circle_model.interval(F(1))
    assert abs(one.omega_minus - (1 - 1 / TWO_PI)) < 1e-9 and abs(one.omega_plus - (1 + 1 / TWO_PI)) < 1e-9


def _scan_edge(f, lo, hi, n_iter=20_000):
    omegas = np.linspace(lo, hi, 201)
    w = winding_number(omegas, n_iter, 2000)
    inside = np.abs(w - float(f)) <= 10 / n_iter
    return omegas, inside


def test_half_tongue_against_winding_scan(circle_model):
    r = circle_model.interval(F(1, 2))
    for edge in (r.omega_minus, r.omega_plus):
        omegas, inside = _scan_edge(F(1, 2), edge - 2e-3, edge + 2e-3)
        step = omegas[1] - omegas[0]
        # the scan flips from outside to inside within a few grid steps of the solver edge
        flips = omegas[1:][inside[1:] != inside[:-1]]
        assert flips.size >= 1
        assert np.min(np.abs(flips - edge)) < 4 * step
    assert r.omega_minus + r.omega_plus == pytest.approx(1.0, abs=1e-9)


def test_tongues_within_a_level_are_disjoint_and_mirrored(circle_model, circle_cfg):
    lvl = list(farey_level(5))
    rs = [circle_model.interval(f) for f in lvl]
    assert all(a.omega_plus < b.omega_minus for a, b in zip(rs, rs[1:]))
    for f, r in zip(lvl, rs):
        m = circle_model.interval(1 - f)
        assert abs(r.omega_minus - (1 - m.omega_plus)) <= 10 * circle_cfg.omega_tol


def test_winding_inside_tongues(circle_model):
    lvl = list(farey_level(5))
    mids = np.array([0.5 * (circle_model.interval(f).omega_minus + circle_model.interval(f).omega_plus)
                     for f in lvl])
    w = winding_number(mids, 2000, 500)
    assert np.all(np.abs(w - np.array([float(f) for f in lvl])) <= 10 / 2000)


@pytest.mark.parametrize("k", range(2, 6))
def test_widths_shrink_with_level(circle_model, k):
    wmax = lambda lvl: max(circle_model.step_width(f) for f in new_fractions(lvl))  # noqa: E731
    assert wmax(k + 1) < wmax(k)


def test_bad_bracket_is_reported_not_zero():
    r = locking_interval(F(1, 2), CircleSolverConfig(), bracket=(float("nan"), float("nan")))
    assert not r.converged and math.isnan(r.width)


def test_nonconverged_intervals_are_listed():
    model = CircleMapModel(CircleSolverConfig())
    for f in (F(1, 2), F(1, 3)):
        model._known[f] = LockingInterval(f, float("nan"), float("nan"), converged=False)
    with pytest.raises(NonConverged) as exc:
        omega_approx(model, 2)
    assert exc.value.fractions == [F(1, 2), F(1, 3)]


def test_parallel_solve_matches_serial(circle_cfg):
    heights = list(farey_level(4))
    serial = CircleMapModel(circle_cfg)
    serial.prefetch(heights)
    pooled = CircleMapModel(circle_cfg, jobs=2)
    pooled.prefetch(heights)
    for f in heights:
        assert serial.interval(f) == pooled.interval(f)


def test_circle_staircase_is_monotone(circle_model):
    st_ = assemble_staircase(circle_model, 5, 3001)
    assert np.all(np.diff(st_.g) >= 0)
    assert st_.g[0] == 0 and st_.g[-1] == 1


def test_cache_round_trip_and_reuse(tmp_path, circle_cfg):
    path = tmp_path / "tongues.jsonl"
    cache = LockCache(path, circle_cfg.omega_tol, circle_cfg.phase_grid, circle_cfg.refine_iters)
    cold = CircleMapModel(circle_cfg, cache)
    cold.prefetch(list(farey_level(3)))
    lines = path.read_text().splitlines()
    assert len(lines) == 5
    q, p, wm, wp, tol, grid, iters = json.loads(lines[0])
    assert (tol, grid, iters) == (circle_cfg.omega_tol, circle_cfg.phase_grid, circle_cfg.refine_iters)
    warm_cache = LockCache(path, circle_cfg.omega_tol, circle_cfg.phase_grid, circle_cfg.refine_iters)
    warm = CircleMapModel(circle_cfg, warm_cache)
    for f in farey_level(3):
        w, c = warm.interval(f), cold.interval(f)
        assert (w.omega_minus, w.omega_plus) == (c.omega_minus, c.omega_plus)
    assert warm_cache.misses == 0 and warm_cache.hits == 5


def test_cache_rejects_other_configs(tmp_path, circle_cfg):
    path = tmp_path / "tongues.jsonl"
    LockCache(path, 1e-10, 256, 60).append([(F(1, 2), 0.46, 0.54)])
    with pytest.raises(CacheConfigMismatch):
        LockCache(path, 1e-9, 256, 60).load()


def test_cache_ignores_torn_last_line(tmp_path):
    path = tmp_path / "tongues.jsonl"
    cache = LockCache(path, 1e-10, 256, 60)
    cache.append([(F(1, 2), 0.46, 0.54)])
    with open(path, "a") as fh:
        fh.write('[1, 3, 0.33')
    assert cache.load() == {F(1, 2): (0.46, 0.54)}

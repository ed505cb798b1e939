"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 solver non-convergence, 4 cache-config mismatch.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
import warnings
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .contfrac import beta_estimate, parse_digits
from .farey import MAX_LISTED_LEVEL, farey_level
from .models import (CacheConfigMismatch, CircleMapModel, CircleSolverConfig, IsingModel,
                     IsingParams, LockCache, NonConverged, assemble_staircase, default_cache_path,
                     ternary)
from .omega import (default_q_grid, omega_approx, alpha_index, dimension_estimate, spectrum,
                    spectrum_shape)
from .selfsim import MissingWidths, fig1_regression, slope_law
from .tables import write_table

EXIT_USAGE = 2
EXIT_NONCONVERGED = 3
EXIT_CACHE_MISMATCH = 4


class UsageError(ValueError):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_model_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=("circle", "ising", "ternary"), default="circle")
    g.add_argument("--a", type=float, default=1.5, help="Ising interaction exponent (a > 1 for positions)")
    g.add_argument("--gamma", type=float, default=1.0, help="Ising scale")
    g.add_argument("--omega-tol", type=float, default=1e-10)
    g.add_argument("--phase-grid", type=int, default=256)
    g.add_argument("--refine-iters", type=int, default=60)
    g.add_argument("--max-period", type=int, default=4096)
    g.add_argument("--cache", default=None,
                   help="locking-interval cache file (default: $FAREYSTAIR_CACHE or ~/.cache/fareystair)")
    g.add_argument("--no-cache", action="store_true")
    g.add_argument("--jobs", type=_positive_int, default=1)


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fareystair",
                                     description="Farey-Brocot staircases and their Cantor dust.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("farey", help="list a Farey-Brocot level")
    p.add_argument("k", type=int)
    _add_output_args(p)

    p = sub.add_parser("classify", help="estimate the type of a continued fraction")
    p.add_argument("digits", help="'1,1,...', '2,2,3', golden, silver, integers, liouville:A1, calibrated:BETA")
    p.add_argument("-N", "--N", dest="N", type=int, default=30)
    p.add_argument("--window", type=int, default=None)
    _add_output_args(p)

    p = sub.add_parser("lock", help="step edges for every height of farey_level(depth + 1)")
    p.add_argument("--depth", type=int, default=3)
    _add_model_args(p)
    _add_output_args(p)

    p = sub.add_parser("staircase", help="sampled staircase g(x)")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--resolution", type=int, default=1001)
    _add_model_args(p)
    _add_output_args(p)

    p = sub.add_parser("omega", help="gap lengths of the depth-k cover of the Cantor dust")
    p.add_argument("--depth", type=int, default=4)
    _add_model_args(p)
    _add_output_args(p)

    p = sub.add_parser("spectrum", help="(alpha, f(alpha)) spectrum of the depth-k cover")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--q-grid", default=None,
                   help="comma-separated q values, or 'Q_MAX:N' for the clustered default grid")
    _add_model_args(p)
    _add_output_args(p)

    p = sub.add_parser("selfsim", help="gap length vs F-B length regressions and their slope law")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--points", default=None, help="also write the regression points to this file")
    _add_model_args(p)
    _add_output_args(p)

    p = sub.add_parser("fig1", help="mean step width against denominator")
    p.add_argument("--p-max", type=int, default=32)
    _add_model_args(p)
    _add_output_args(p)
    return parser


def _model_meta(args) -> list[tuple[str, object]]:
    meta: list[tuple[str, object]] = [("model", args.model)]
    if args.model == "ising":
        meta += [("a", args.a), ("gamma", args.gamma)]
    elif args.model == "circle":
        meta += [("omega_tol", args.omega_tol), ("phase_grid", args.phase_grid),
                 ("refine_iters", args.refine_iters), ("max_period", args.max_period)]
    return meta


def _make_model(args):
    if args.model == "ternary":
        return ternary(), None
    if args.model == "ising":
        try:
            return IsingModel(IsingParams(args.a, args.gamma)), None
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    try:
        cfg = CircleSolverConfig(args.omega_tol, args.phase_grid, args.refine_iters, args.max_period)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cache = None
    if not args.no_cache:
        path = args.cache or default_cache_path()
        cache = LockCache(path, cfg.omega_tol, cfg.phase_grid, cfg.refine_iters)
    return CircleMapModel(cfg, cache, args.jobs), cache


def _require_summable(args, what: str) -> None:
    if args.model == "ising" and not args.a > 1:
        raise UsageError(f"{what} needs a > 1 (the staircase with a = {args.a} has divergent width)")


@contextlib.contextmanager
def _open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit(args, columns, rows, meta, trailer=()):
    meta = [("command", args.command)] + list(meta)
    with _open_output(args.output) as out:
        write_table(out, columns, rows, meta, trailer, args.format)


def cmd_farey(args) -> None:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    if args.k > MAX_LISTED_LEVEL:
        raise UsageError(f"refusing to list level {args.k}: it has 2**{args.k - 1} + 1 entries "
                         f"(cap is k = {MAX_LISTED_LEVEL})")
    rows = [(f.numerator, f.denominator) for f in farey_level(args.k)]
    _emit(args, ["Q", "P"], rows, [("k", args.k)])


def cmd_classify(args) -> None:
    if args.N < 2:
        raise UsageError("N must be >= 2")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            pq = parse_digits(args.digits, n=args.N)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        try:
            est = beta_estimate(pq, args.N, args.window)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    meta = [("digits", args.digits), ("N", args.N), ("window", est.window),
            ("divergence_threshold", est.meta["divergence_threshold"]),
            ("divergence_min_step", est.meta["divergence_min_step"])]
    if est.label == "rational":
        print(f"{args.digits}: finite continued fraction, the number is rational", file=sys.stderr)
        _emit(args, ["n", "ratio", "exponent", "kappa"], [], meta,
              [("label", "rational"), ("beta_hat", float("nan"))])
        return
    kappas = est.kappa_series or [float("nan")] * len(est.indices)
    rows = list(zip(est.indices, est.ratio_series, est.exponent_series, kappas))
    print(f"{args.digits}: beta_hat={est.beta_hat:.6g} label={est.display}", file=sys.stderr)
    _emit(args, ["n", "ratio", "exponent", "kappa"], rows, meta,
          [("label", est.label), ("beta_hat", est.beta_hat)])


def _report_cache(cache) -> None:
    if cache is not None:
        print(f"cache: {cache.path} hits={cache.hits} computed={cache.misses}", file=sys.stderr)


def cmd_lock(args) -> None:
    if args.depth < 0:
        raise UsageError("depth must be >= 0")
    if args.model == "ising":
        _require_summable(args, "step positions")
    model, cache = _make_model(args)
    heights = sorted(farey_level(args.depth + 1), key=lambda f: (f.denominator, f.numerator))
    model.prefetch(heights)
    bad = [f for f in heights if getattr(model, "interval", None) and not model.interval(f).converged]
    if bad:
        raise NonConverged(bad)
    rows = []
    for f in heights:
        lo, hi = model.step_position(f)
        rows.append((f.numerator, f.denominator, lo, hi, hi - lo))
    _report_cache(cache)
    _emit(args, ["Q", "P", "x_left", "x_right", "width"], rows,
          [("depth", args.depth)] + _model_meta(args))


def cmd_staircase(args) -> None:
    if args.depth < 1 or args.resolution < 2:
        raise UsageError("need depth >= 1 and resolution >= 2")
    _require_summable(args, "the staircase")
    model, cache = _make_model(args)
    sample = assemble_staircase(model, args.depth, args.resolution)
    rows = [(float(x), float(g)) for x, g in zip(sample.x, sample.g)]
    _report_cache(cache)
    _emit(args, ["x", "g"], rows, [("depth", args.depth), ("resolution", args.resolution)]
          + _model_meta(args))


def cmd_omega(args) -> None:
    if args.depth < 0:
        raise UsageError("depth must be >= 0")
    _require_summable(args, "the Cantor dust")
    model, cache = _make_model(args)
    approx = omega_approx(model, args.depth)
    rows = []
    for i, iv in enumerate(approx.intervals):
        alpha = alpha_index(approx, i) if args.depth > 0 else float("nan")
        rows.append((i, iv.label.left.numerator, iv.label.left.denominator,
                     iv.label.right.numerator, iv.label.right.denominator, iv.length, alpha))
    _report_cache(cache)
    _emit(args, ["i", "Q", "P", "Q2", "P2", "length", "alpha"], rows,
          [("depth", args.depth)] + _model_meta(args),
          [("domain_length", approx.domain_length), ("total_length", approx.total_length())])


def _parse_q_grid(text: Optional[str]) -> list[float]:
    if text is None:
        return default_q_grid()
    try:
        if ":" in text:
            q_max, n = text.split(":")
            return default_q_grid(int(n), float(q_max))
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed q grid {text!r}") from exc


def cmd_spectrum(args) -> None:
    if args.depth < 1:
        raise UsageError("depth must be >= 1")
    _require_summable(args, "the Cantor dust")
    grid = _parse_q_grid(args.q_grid)
    model, cache = _make_model(args)
    approx = omega_approx(model, args.depth)
    try:
        pts = spectrum(approx, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    shape = spectrum_shape(pts, args.depth)
    rows = [(p.q, p.tau, p.alpha, p.f) for p in pts]
    _report_cache(cache)
    _emit(args, ["q", "tau", "alpha", "f"], rows,
          [("depth", args.depth), ("q_grid", args.q_grid or "default")] + _model_meta(args),
          [("dimension_estimate", dimension_estimate(approx)),
           ("alpha_min_at_depth", shape.alpha_min), ("alpha_max_at_depth", shape.alpha_max),
           ("alpha_at_max_f", shape.alpha_at_peak), ("f_at_alpha_min", shape.f_at_alpha_min),
           ("rising_fraction", shape.increasing_fraction)])


def cmd_selfsim(args) -> None:
    _require_summable(args, "the Cantor dust")
    model, cache = _make_model(args)
    try:
        law = slope_law(model, range(args.k_min, args.k_max + 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(r.depth, r.fit.slope, r.fit.intercept, r.fit.r2) for r in law.inner_fits]
    meta = [("k_min", args.k_min), ("k_max", args.k_max)] + _model_meta(args)
    if args.points:
        pts = [(r.depth, p.label.left.numerator, p.label.left.denominator, p.label.right.numerator,
                p.label.right.denominator, p.omega_length, p.fb_length)
               for r in law.inner_fits for p in r.points]
        with open(args.points, "w", encoding="utf-8", newline="\n") as fh:
            write_table(fh, ["k", "Q", "P", "Q2", "P2", "omega_len", "fb_len"], pts,
                        [("command", "selfsim-points")] + meta, (), args.format)
    for k in law.flagged:
        print(f"warning: depth {k} regression has r2 below 0.9", file=sys.stderr)
    _report_cache(cache)
    _emit(args, ["k", "slope", "intercept", "r2"], rows, meta,
          [("law_slope", law.linear_fit.slope), ("law_intercept", law.linear_fit.intercept),
           ("law_r2", law.linear_fit.r2)])


def cmd_fig1(args) -> None:
    model, cache = _make_model(args)
    try:
        res = fig1_regression(model, args.p_max)
    except MissingWidths as exc:
        raise NonConverged(exc.missing) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(p, w, math.log10(p), math.log10(w)) for p, w in res.rows]
    _report_cache(cache)
    _emit(args, ["P", "mean_width", "logP", "log_mean_width"], rows,
          [("p_max", args.p_max)] + _model_meta(args),
          [("slope", res.fit.slope), ("intercept_log10", res.fit.intercept / math.log(10)),
           ("r2", res.fit.r2), ("residual_max_ln", res.fit.residual_max)])


COMMANDS = {
    "farey": cmd_farey, "classify": cmd_classify, "lock": cmd_lock, "staircase": cmd_staircase,
    "omega": cmd_omega, "spectrum": cmd_spectrum, "selfsim": cmd_selfsim, "fig1": cmd_fig1,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fareystair {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConverged as exc:
        print(f"fareystair {args.command}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except CacheConfigMismatch as exc:
        print(f"fareystair {args.command}: {exc}", file=sys.stderr)
        return EXIT_CACHE_MISMATCH
    except ValueError as exc:
        print(f"fareystair {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())

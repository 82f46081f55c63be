"""Command-line front end.

Exit status: 0 success, 1 input error (config, arguments, paths), 2 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import _logmod
from .config import bundled_config_path, bundled_configs, load_config
from .errors import ConfigError, PoincareWebError
from .linearizer import eval_L
from .pipeline import make_context, run_config, stage_analyze, stage_growth, stage_render, stage_series, stage_web
from .web import build_web, choose_R

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2


def _resolve(path: str) -> str:
    # an existing file wins over a bundled name
    if not Path(path).exists() and path.removesuffix(".json") in bundled_configs():
        return str(bundled_config_path(path))
    return path


def _ctx(args):
    cfg = load_config(_resolve(args.config))
    return make_context(cfg, args.out, args.depth)


def cmd_analyze(args):
    doc = stage_analyze(_ctx(args))
    print(f"fixed point {doc['selected'][0]:.17g}{doc['selected'][1]:+.17g}j: component {doc['component']}")


def cmd_series(args):
    ctx = _ctx(args)
    s = stage_series(ctx)
    print(f"N={s.N} lambda={s.lam:.17g} r0={s.r0:.17g} -> {ctx.out_dir / 'series.txt'}")


def cmd_eval(args):
    ctx = _ctx(args)
    s = stage_series(ctx)
    out = eval_L(s, ctx.p, complex(args.re, args.im))
    if out.mode == "exact":
        v = out.value.to_complex()
        print(f"L(z) = {v.real:.17g}{v.imag:+.17g}j  (exact, pullback {out.pullback})")
    else:
        print(f"log|L(z)| in [{_logmod.fmt17(out.lo)}, {_logmod.fmt17(out.hi)}]  (log_interval, pullback {out.pullback})")


def cmd_growth(args):
    summary = stage_growth(_ctx(args))
    for k in sorted(summary):
        print(f"{k}: {summary[k]}")


def cmd_rings(args):
    ctx = _ctx(args)
    stage_series(ctx)
    if not ctx.verdict.is_singleton:
        print(f"component {ctx.verdict.status.value}: no rings")
        return
    params = choose_R(ctx.series, ctx.p, depth=ctx.depth)
    rep = build_web(ctx.series, ctx.p, params, ctx.depth, case_label=ctx.cfg.label)
    for c in rep.certificates:
        print(f"n={c.n} l_t={c.l_t} log_min={_logmod.fmt17(c.log_min_on_ring)} "
              f"log_max_inner={_logmod.fmt17(c.log_max_inner)} separates={c.separates} verdict={c.verdict}")


def cmd_web(args):
    rep = stage_web(_ctx(args))
    print(f"verdict {rep.verdict.value}")


def cmd_render(args):
    ctx = _ctx(args)
    img = stage_render(ctx)
    if img is None:
        print("no render section in config")
    else:
        print(f"{img.width}x{img.height} -> {ctx.out_dir / 'levels.ppm'}")


def cmd_run(args):
    ctx = run_config(load_config(_resolve(args.config)), args.out, args.depth)
    print(f"verdict {ctx.report.verdict.value}; outputs in {ctx.out_dir}")


COMMANDS = {
    "analyze": (cmd_analyze, "fixed points, critical orbits and the component verdict"),
    "series": (cmd_series, "build the linearizer series and write the cache file"),
    "eval": (cmd_eval, "evaluate the linearizer at a point"),
    "growth": (cmd_growth, "modulus profile, order fit and growth tables"),
    "rings": (cmd_rings, "minimum-modulus ring certificates"),
    "web": (cmd_web, "web report (construction or falsification)"),
    "render": (cmd_render, "level-set image with ring overlay (PPM)"),
    "run": (cmd_run, "full pipeline"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="poincare-web", description="Linearizers of polynomials and level-set webs.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (fn, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True, help="config path or bundled config name")
        sp.add_argument("--depth", type=int, default=None, help="override the certification depth")
        sp.add_argument("--out", default=None, help="output directory")
        if name == "eval":
            sp.add_argument("re", type=float)
            sp.add_argument("im", type=float, nargs="?", default=0.0)
        sp.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PoincareWebError, ArithmeticError, ValueError) as exc:
        print(f"numeric failure in {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

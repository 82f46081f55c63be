"""The analyze -> series -> growth -> web pipeline driven by a run configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


from .config import RunConfig, load_config
from .dynamics import critical_escape, find_fixed_points, nearest_fixed_point
from .errors import PoincareWebError
from .escape import component_verdict
from .growth import modulus_profile, order_estimate, theoretical_order
from .linearizer import dumps_series, koenigs_series
from .polynomial import GrowthBounds, filled_julia_bound
from .render import render_levels
from .report import fast_growth_csv, profile_csv, regularity_csvs, write_report, write_text
from .web import WebReport, build_web, choose_R, dumps_json, falsify_web, verify_fast_growth, verify_regularity


@dataclass
class Context:
    """Intermediate results shared between stages."""

    cfg: RunConfig
    out_dir: Path
    depth: int
    p: object = None
    fp: object = None
    series: object = None
    verdict: object = None
    params: object = None
    report: object = None
    tables: dict = field(default_factory=dict)


def make_context(cfg: RunConfig, out_dir=None, depth=None) -> Context:
    out = Path(out_dir if out_dir is not None else cfg.section("outputs").get("dir", "out"))
    return Context(cfg, out, cfg.get("depth") if depth is None else int(depth))


def select_fixed_point(p, hint):
    if isinstance(hint, complex):
        return nearest_fixed_point(p, hint)
    fps = [f for f in find_fixed_points(p) if f.repelling]
    if not fps:
        raise PoincareWebError("no repelling fixed point")
    if hint >= len(fps):
        raise PoincareWebError(f"fixed point index {hint} out of range ({len(fps)} repelling)")
    return fps[hint]


def stage_analyze(ctx: Context) -> dict:
    cfg = ctx.cfg
    ctx.p = cfg.polynomial
    ctx.fp = select_fixed_point(ctx.p, cfg.fixed_point_hint())
    ctx.verdict = component_verdict(ctx.p, ctx.fp.z0, cfg.get("verdict_scales"))
    crit = critical_escape(ctx.p)
    doc = {
        "label": cfg.label,
        "degree": ctx.p.degree,
        "fixed_points": [{"z0": [f.z0.real, f.z0.imag], "multiplier": [f.multiplier.real, f.multiplier.imag],
                          "class": f.cls.value, "multiplicity": f.multiplicity} for f in find_fixed_points(ctx.p)],
        "selected": [ctx.fp.z0.real, ctx.fp.z0.imag],
        "critical_points": [{"point": [c.point.real, c.point.imag], "escapes": c.escapes,
                             "first_exit": c.first_exit} for c in crit],
        "component": ctx.verdict.status.value,
        "K": filled_julia_bound(ctx.p),
    }
    write_text(ctx.out_dir / "analysis.json", dumps_json(doc))
    return doc


def stage_series(ctx: Context):
    if ctx.fp is None:
        stage_analyze(ctx)
    sc = ctx.cfg.section("series")
    ctx.series = koenigs_series(ctx.p, ctx.fp, N=sc["N"], normalization=complex(*sc["normalization"]), tol=sc["tol"])
    write_text(ctx.out_dir / "series.txt", dumps_series(ctx.series))
    return ctx.series


def stage_growth(ctx: Context) -> dict:
    if ctx.series is None:
        stage_series(ctx)
    cfg, s, p = ctx.cfg, ctx.series, ctx.p
    k = cfg.get("samples")
    prof = modulus_profile(s, p, cfg.get("profile_radii"), k)
    ctx.tables["profile.csv"] = profile_csv(prof)
    summary = {"order_theory": theoretical_order(p, s.lam)}
    try:
        summary["order_fit"] = order_estimate(prof)
    except ValueError as exc:
        summary["order_fit_error"] = str(exc)
    reg = cfg.section("regularity")
    if "r" in reg:
        gb = GrowthBounds.for_polynomial(p, cfg.get("eps"))
        rows = verify_regularity(s, p, gb, reg["r"], reg["n_max"], k=k)
        lower, upper = regularity_csvs(rows)
        ctx.tables["regularity_lower.csv"] = lower
        ctx.tables["regularity_upper.csv"] = upper
        summary["regularity_pass"] = all(r.passed for r in rows)
    fg = cfg.section("fast_growth")
    n0, n1 = fg["n_range"]
    params = _params(ctx, max(n1, ctx.depth))
    n1 = min(n1, params.depth)
    if n0 <= n1:
        rows = verify_fast_growth(s, p, fg["k"], params, range(n0, n1 + 1))
        ctx.tables["fast_growth.csv"] = fast_growth_csv(rows)
        summary["fast_growth_pass"] = all(r.passed for r in rows)
    for name, text in ctx.tables.items():
        write_text(ctx.out_dir / name, text)
    return summary


def _params(ctx: Context, depth: int):
    if ctx.params is None or ctx.params.depth < depth and not ctx.params.depth_capped:
        ctx.params = choose_R(ctx.series, ctx.p, depth=depth, k=ctx.cfg.get("samples"))
    return ctx.params


def stage_web(ctx: Context) -> WebReport:
    if ctx.series is None:
        stage_series(ctx)
    s, p = ctx.series, ctx.p
    K = filled_julia_bound(p)
    if ctx.verdict.is_singleton:
        params = _params(ctx, ctx.depth)
        report = build_web(s, p, params, ctx.depth, case_label=ctx.cfg.label, K=K)
    else:
        params = _params(ctx, 1)
        report = WebReport(ctx.cfg.label, K, params.R, params.R_1)
        fr = falsify_web(s, p, K, ctx.cfg.get("falsify_radii"), ctx.cfg.get("samples"))
        report.verdict = fr.verdict
        report.notes.append("component not a point: web construction not attempted")
        report.falsify = fr.to_dict()
    ctx.report = report
    write_report(report, {}, ctx.out_dir)
    return report


def stage_render(ctx: Context):
    if ctx.report is None:
        stage_web(ctx)
    rc = ctx.cfg.section("render")
    if not rc:
        return None
    depth = rc.get("depth", 3)
    params = _params(ctx, depth)
    rings = [c.ring for c in ctx.report.certificates if c.verdict]
    img = render_levels(ctx.series, ctx.p, params, complex(*rc.get("center", [0, 0])), rc.get("width", 20.0),
                        rc.get("pixels", [160, 160]), depth, rings)
    img.save(ctx.out_dir / "levels.ppm")
    return img


def run_config(path, out_dir=None, depth=None) -> Context:
    """Full pipeline; writes analysis, series cache, CSV tables, the web report and the image."""
    cfg = load_config(path) if not isinstance(path, RunConfig) else path
    ctx = make_context(cfg, out_dir, depth)
    stage_analyze(ctx)
    stage_series(ctx)
    stage_growth(ctx)
    stage_web(ctx)
    stage_render(ctx)
    return ctx

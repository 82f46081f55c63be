"""CSV tables and JSON documents; every real is written with 17 significant digits."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from ._logmod import fmt17
from .web import dumps_json


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    try:
        return fmt17(x)
    except (TypeError, ValueError):
        return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def profile_csv(profile) -> str:
    return csv_text(["r", "logM", "logm"], zip(profile.radii.tolist(), profile.logM.tolist(), profile.logm.tolist()))


def fast_growth_csv(rows) -> str:
    return csv_text(["n", "lhs", "rhs", "pass"], [(r.n, r.lhs, r.rhs, r.passed) for r in rows])


def regularity_csvs(rows) -> tuple[str, str]:
    """Lower-bound table (``lower <= ratio``) and upper-bound table (``ratio <= upper``)."""
    lower = csv_text(["n", "lhs", "rhs", "pass"],
                     [(r.n, r.lower, r.ratio, r.passed) for r in rows])
    upper = csv_text(["n", "lhs", "rhs", "pass"],
                     [(r.n, r.ratio, r.upper, r.passed) for r in rows])
    return lower, upper


def read_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path


def write_report(report, tables: dict, out_dir) -> list[Path]:
    """Write ``web_report.json`` and one CSV per entry of ``tables`` (name -> text)."""
    out_dir = Path(out_dir)
    written = [write_text(out_dir / "web_report.json", dumps_json(report.to_dict()))]
    for name in sorted(tables):
        written.append(write_text(out_dir / name, tables[name]))
    return written

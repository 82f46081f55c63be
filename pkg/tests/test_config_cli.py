import json

import numpy as np
import pytest

from poincare_web import ConfigError, choose_R, level_membership, parse_config, run_config
from poincare_web.cli import main
from poincare_web.config import bundled_config_path, bundled_configs
from poincare_web.render import RasterImage, read_ppm, render_levels, PALETTE
from poincare_web.report import csv_text, read_csv

MINIMAL = '{"version": 1, "polynomial": [[-5, 0], [0, 0], [1, 0]]}'


def test_bundled_configs_parse():
    assert set(bundled_configs()) == {"quadratic_outside", "chebyshev", "exponential"}
    for name in bundled_configs():
        cfg = parse_config(bundled_config_path(name).read_text())
        assert cfg.polynomial.degree == 2


def test_defaults_fill_missing_sections():
    cfg = parse_config(MINIMAL)
    assert cfg.get("depth") >= 1 and cfg.section("series")["N"] > 0


def test_syntax_error_reports_position():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config('{"version": 1,, }')


def test_schema_error_names_field():
    with pytest.raises(ConfigError, match="depth"):
        parse_config('{"version": 1, "polynomial": [[1, 0], [0, 0], [1, 0]], "depth": "three"}')


def test_zero_leading_coefficient():
    with pytest.raises(ConfigError, match="leading coefficient a_d must be nonzero"):
        parse_config('{"version": 1, "polynomial": [[1, 0], [2, 0], [0, 0]]}')


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "polynomial": [[1, 0], [2, 0], [0, 0]]}')
    assert main(["analyze", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert main(["analyze", "--config", str(tmp_path / "missing.json")]) == 1
    assert main(["nonsense"]) == 1
    assert main(["analyze", "--config", "quadratic_outside", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert doc["component"] == "singleton_certified"


def test_cli_eval_exponential(tmp_path, capsys):
    assert main(["eval", "--config", "exponential", "--out", str(tmp_path), "10"]) == 0
    out = capsys.readouterr().out
    value = float(out.split("=")[1].split("+")[0].split("-0j")[0].strip().rstrip("j"))
    assert value == pytest.approx(np.exp(10), rel=1e-8)


@pytest.mark.parametrize("cmd", ["series", "growth", "rings", "web", "render"])
def test_cli_subcommands(cmd, tmp_path):
    assert main([cmd, "--config", "quadratic_outside", "--out", str(tmp_path), "--depth", "2"]) == 0


def test_csv_round_trip_17_digits():
    x = [0.1, 1 / 3, np.pi * 1e200, -2.5e-300]
    text = csv_text(["a"], [[v] for v in x])
    header, rows = read_csv(text)
    assert header == ["a"] and [float(r[0]) for r in rows] == x


def test_ppm_round_trip():
    px = np.arange(2 * 3 * 3, dtype=np.uint8).reshape(2, 3, 3)
    img = read_ppm(RasterImage(3, 2, px).to_ppm())
    assert img.width == 3 and np.array_equal(img.pixels, px)
    with pytest.raises(ValueError):
        RasterImage(0, 1, px)


def test_single_pixel_render_matches_membership(outside):
    p, s = outside
    par = choose_R(s, p, depth=3)
    for c in (0j, 40.0, 5 + 60j, -300j):
        img = render_levels(s, p, par, c, 1.0, (1, 1), 3)
        lvl = level_membership(s, p, c, par, 3).max_level
        assert np.array_equal(img.pixels[0, 0], PALETTE[lvl])


def test_pipeline_is_deterministic(tmp_path):
    for name in bundled_configs():
        a, b = tmp_path / f"{name}_a", tmp_path / f"{name}_b"
        run_config(bundled_config_path(name), a)
        run_config(bundled_config_path(name), b)
        files = sorted(f.name for f in a.iterdir())
        assert files == sorted(f.name for f in b.iterdir()) and "web_report.json" in files
        for f in files:
            assert (a / f).read_bytes() == (b / f).read_bytes(), f

"""Run configuration: JSON documents with a ``version`` field, complex numbers as ``[re, im]``."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import ConfigError
from .polynomial import Polynomial

CONFIG_VERSION = 1

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_POS = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "required": ["version", "polynomial"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": CONFIG_VERSION},
        "label": {"type": "string"},
        "polynomial": {"type": "array", "items": _COMPLEX, "minItems": 3},
        "fixed_point": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"index": {"type": "integer", "minimum": 0}, "nearest": _COMPLEX},
        },
        "series": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 2},
                "tol": _POS,
                "normalization": _COMPLEX,
            },
        },
        "depth": {"type": "integer", "minimum": 0, "maximum": 6},
        "eps": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 0.5},
        "samples": {"type": "integer", "minimum": 8},
        "profile_radii": {"type": "array", "items": _POS},
        "regularity": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"r": _POS, "n_max": {"type": "integer", "minimum": 1}},
        },
        "fast_growth": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "k": {"type": "integer", "minimum": 1},
                "n_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
            },
        },
        "falsify_radii": {"type": "array", "items": _POS},
        "verdict_scales": {"type": "array", "items": _POS},
        "render": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "center": _COMPLEX,
                "width": _POS,
                "pixels": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
                "depth": {"type": "integer", "minimum": 1, "maximum": 3},
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}},
        },
    },
}

DEFAULTS = {
    "label": "",
    "fixed_point": {"index": 0},
    "series": {"N": 64, "tol": 1e-9, "normalization": [1.0, 0.0]},
    "depth": 3,
    "eps": 0.01,
    "samples": 1024,
    "profile_radii": [10.0, 17.78279410038923, 31.622776601683793, 56.23413251903491, 100.0,
                      177.82794100389228, 316.22776601683796, 562.341325190349, 1000.0],
    "regularity": {"n_max": 6},
    "fast_growth": {"k": 1, "n_range": [2, 4]},
    "falsify_radii": [1.0, 5.0, 10.0, 50.0],
    "verdict_scales": [0.1, 0.01],
    "outputs": {"dir": "out"},
}


@dataclass
class RunConfig:
    """Validated configuration with defaults applied."""

    data: dict
    source: str = "<memory>"

    @property
    def label(self) -> str:
        return self.data["label"]

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial([complex(a, b) for a, b in self.data["polynomial"]])

    def get(self, key, default=None):
        return self.data.get(key, default)

    def section(self, key) -> dict:
        return self.data.get(key) or {}

    def fixed_point_hint(self):
        fp = self.section("fixed_point")
        if "nearest" in fp:
            return complex(*fp["nearest"])
        return int(fp.get("index", 0))


def _merge(defaults, given):
    out = copy.deepcopy(defaults)
    for k, v in given.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _field(path) -> str:
    text = ""
    for p in path:
        text += f"[{p}]" if isinstance(p, int) else (f".{p}" if text else str(p))
    return text or "<root>"


def parse_config(text: str, source: str = "<memory>") -> RunConfig:
    """Parse and validate a config document; errors name the line or field."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = [f"field {_field(e.absolute_path)}: {e.message}" for e in errors]
        raise ConfigError(f"{source}: " + "; ".join(msgs))
    data = _merge(DEFAULTS, raw)
    coeffs = data["polynomial"]
    if not all(math.isfinite(x) for c in coeffs for x in c):
        raise ConfigError(f"{source}: field polynomial: coefficients must be finite")
    if coeffs[-1][0] == 0 and coeffs[-1][1] == 0:
        raise ConfigError(f"{source}: field polynomial[{len(coeffs) - 1}]: leading coefficient a_d must be nonzero")
    n0, n1 = data["fast_growth"]["n_range"]
    if n0 > n1:
        raise ConfigError(f"{source}: field fast_growth.n_range: start exceeds end")
    radii = data["profile_radii"]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConfigError(f"{source}: field profile_radii: radii must be strictly ascending")
    return RunConfig(data, source)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_config(text, str(path))


def bundled_configs() -> list[str]:
    """Names of the bundled configs, without the ``.json`` suffix."""
    return sorted(p.name[:-5] for p in resources.files("poincare_web.configs").iterdir() if p.name.endswith(".json"))


def bundled_config_path(name: str) -> Path:
    """Filesystem path of a bundled config, given as ``quadratic_outside`` or ``quadratic_outside.json``."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("poincare_web.configs").joinpath(name)))

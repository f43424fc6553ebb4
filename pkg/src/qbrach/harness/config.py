"""Scenario configuration documents.

A scenario is a JSON object::

    {
      "kind": "pt-sweep",
      "parameters": {"deltaE": 1.0, "alpha_min": 0.0, "alpha_max": 1.5, "alpha_count": 16},
      "output": {"path": "sweep.csv", "format": "csv"}
    }

Missing parameters are filled with the defaults of the chosen kind; unknown
keys are rejected so that typos do not silently fall back to defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

from ..errors import ConfigError

KINDS = ("evolve", "passage", "round-trip", "pt-sweep", "optimize")
FORMATS = ("csv", "json")
DEFAULT_STEPS = 10_000

_COMMON = {
    "deltaE": 1.0,
    "O0": 0.0,
    "P_I": [0.0, 0.0, 1.0],
    "P_F": [0.0, 0.0, -1.0],
    "t_max": None,
    "steps": DEFAULT_STEPS,
    "seed": None,
}

DEFAULTS: dict[str, dict[str, Any]] = {
    "evolve": {**_COMMON, "theta": 0.0, "time_count": 11},
    "passage": {**_COMMON, "theta": 0.0, "theta_count": 1},
    "round-trip": {**_COMMON, "theta": 0.0, "theta_count": 1},
    "pt-sweep": {
        **_COMMON,
        "family": "alpha",
        "alpha_min": 0.0,
        "alpha_max": 1.5,
        "alpha_count": 16,
        "ratio_min": 0.0,
        "ratio_max": 0.9,
        "ratio_count": 10,
        "s": 1.0,
        "theta": math.pi / 2,
        "rcos_offset": 0.0,
    },
    "optimize": {**_COMMON, "grid": 1000},
}

# Key that the CLI's --grid flag sets for each kind.
GRID_KEY = {
    "evolve": "time_count",
    "passage": "theta_count",
    "round-trip": "theta_count",
    "pt-sweep": "alpha_count",
    "optimize": "grid",
}

_INT_KEYS = {"steps", "time_count", "theta_count", "alpha_count", "ratio_count", "grid"}
_TRIPLE_KEYS = {"P_I", "P_F"}
_STRING_KEYS = {"family"}


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    parameters: dict[str, Any]
    output_path: Optional[str] = None
    output_format: str = "csv"
    digest: str = field(default="", compare=False)

    def get(self, key: str):
        return self.parameters[key]


def _number(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(key, f"expected a finite number, got {value!r}")
    return value


def _integer(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return int(value)


def _coerce(key: str, value):
    path = f"parameters.{key}"
    if value is None:
        if key in ("t_max", "seed"):
            return None
        raise ConfigError(path, "must not be null")
    if key in _TRIPLE_KEYS:
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise ConfigError(path, f"expected a Bloch triple [x, y, z], got {value!r}")
        triple = [_number(f"{path}[{i}]", v) for i, v in enumerate(value)]
        norm = math.sqrt(sum(v * v for v in triple))
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(path, f"Bloch vector must have unit norm, got {norm!r}")
        return [v / norm for v in triple]
    if key in _STRING_KEYS:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if key in _INT_KEYS or key == "seed":
        return _integer(path, value)
    return _number(path, value)


def _validate(kind: str, p: dict[str, Any]) -> None:
    def fail(key, msg):
        raise ConfigError(f"parameters.{key}", msg)

    if not p["deltaE"] > 0:
        fail("deltaE", f"must be > 0, got {p['deltaE']!r}")
    if p["steps"] < 1:
        fail("steps", f"must be >= 1, got {p['steps']!r}")
    if p["t_max"] is not None and not p["t_max"] > 0:
        fail("t_max", f"must be > 0, got {p['t_max']!r}")
    if kind == "evolve" and p["time_count"] < 1:
        fail("time_count", "must be >= 1")
    if kind in ("passage", "round-trip") and p["theta_count"] < 1:
        fail("theta_count", "must be >= 1")
    if kind == "optimize" and p["grid"] < 100:
        fail("grid", f"must be >= 100, got {p['grid']!r}")
    if kind == "pt-sweep":
        family = p["family"]
        if family not in ("alpha", "ratio"):
            fail("family", f"must be 'alpha' or 'ratio', got {family!r}")
        if family == "alpha":
            for key in ("alpha_min", "alpha_max"):
                if not abs(p[key]) < math.pi / 2:
                    fail(key, f"|{key}| must be < pi/2, got {p[key]!r}")
            _check_count(p, "alpha", fail)
        else:
            if not p["s"] > 0:
                fail("s", f"must be > 0, got {p['s']!r}")
            for key in ("ratio_min", "ratio_max"):
                if p[key] < 0:
                    fail(key, f"must be >= 0, got {p[key]!r}")
            _check_count(p, "ratio", fail)


def _check_count(p, prefix, fail):
    count = p[f"{prefix}_count"]
    single = p[f"{prefix}_min"] == p[f"{prefix}_max"]
    if count < (1 if single else 2):
        fail(f"{prefix}_count", f"must be >= 2 for a sweep, got {count!r}")


def config_digest(kind: str, parameters: dict[str, Any]) -> str:
    canonical = json.dumps({"kind": kind, "parameters": parameters}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_config(doc: dict[str, Any]) -> ScenarioConfig:
    """Validate a decoded scenario document and fill defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "scenario document must be a JSON object")
    unknown = set(doc) - {"kind", "parameters", "output"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level key")
    if "kind" not in doc:
        raise ConfigError("kind", "missing required key")
    kind = doc["kind"]
    if kind not in KINDS:
        raise ConfigError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")

    raw = doc.get("parameters", {})
    if not isinstance(raw, dict):
        raise ConfigError("parameters", "must be an object")
    defaults = DEFAULTS[kind]
    for key in raw:
        if key not in defaults:
            raise ConfigError(f"parameters.{key}", f"unknown parameter for kind {kind!r}")
    params = {key: _coerce(key, raw.get(key, default)) for key, default in defaults.items()}
    _validate(kind, params)

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output", "must be an object")
    for key in output:
        if key not in ("path", "format"):
            raise ConfigError(f"output.{key}", "unknown output key")
    fmt = output.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError("output.format", f"must be 'csv' or 'json', got {fmt!r}")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path", "must be a string")

    return ScenarioConfig(kind, params, path, fmt, digest=config_digest(kind, params))


def load_config(text) -> ScenarioConfig:
    """Parse and validate a UTF-8 JSON scenario document."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError("<root>", f"not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<root>", f"invalid JSON: {exc}") from None
    return build_config(doc)

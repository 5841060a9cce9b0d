"""Run configuration: sectioned ``key = value`` text or the equivalent JSON.

Every section and key is declared in SCHEMA with its type and default;
unknown keys are errors.  A sweep names one ``section.key`` and a linear
range; each sweep point is the base configuration with that key replaced.
"""

from __future__ import annotations

import configparser
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ConfigError
from .field import DetectorParams, FieldModel, QuadratureConfig
from .harvest import HarvestCoefficients
from .teleport import Strategy

SCENARIOS = ("harvest", "teleport", "nogo", "compare")


def _bool(s: str) -> bool:
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s) -> tuple[float, ...]:
    if isinstance(s, (list, tuple)):
        return tuple(float(x) for x in s)
    return tuple(float(x) for x in str(s).replace(",", " ").split())


_DETECTOR = {
    "gap": (float, 1.0),
    "coupling": (float, 0.1),
    "x": (float, 0.0),
    "y": (float, 0.0),
    "z": (float, 0.0),
    "switching_center": (float, 0.0),
    "switching_width": (float, 1.0),
    "smearing_width": (float, 0.5),
}

SCHEMA: dict[str, dict[str, tuple]] = {
    "run": {
        "scenario": (str, None),
        "seed": (int, 0),
        "threads": (int, 1),
        "out": (str, "results"),
    },
    "field": {"dimension": (int, 3), "mass": (float, 0.0)},
    "detector_A": dict(_DETECTOR),
    "detector_B": {**_DETECTOR, "x": (float, 2.0)},
    "input": {"p": (float, 0.5)},
    "strategy": {"name": (str, "phase_corrected")},
    "coefficients": {
        "L_AA": (float, None),
        "L_BB": (float, None),
        "L_AB_re": (float, 0.0),
        "L_AB_im": (float, 0.0),
        "M_re": (float, 0.0),
        "M_im": (float, 0.0),
    },
    "sweep": {"parameter": (str, None), "start": (float, None), "stop": (float, None), "steps": (int, None)},
    "quadrature": {
        "k_max_multiplier": (float, 8.0),
        "time_window_multiplier": (float, 8.0),
        "rel_tol": (float, 1e-8),
        "abs_tol": (float, 1e-12),
        "initial_nodes": (int, 64),
        "max_nodes": (int, 1 << 14),
    },
    "nogo": {
        "model": (str, "oscillator"),
        "count": (int, 1),
        "field_dim": (int, 10),
        "ancilla_dim": (int, 2),
        "system_dim": (int, 2),
        "lambdas": (_floats, (0.005, 0.0075, 0.01, 0.015, 0.02, 0.03, 0.05)),
        "couple_A": (_bool, True),
        "couple_B": (_bool, True),
        "center_B": (float, 2.0),
        "tolerance": (float, 1e-8),
    },
}


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class NogoConfig:
    model: str = "oscillator"
    count: int = 1
    field_dim: int = 10
    ancilla_dim: int = 2
    system_dim: int = 2
    lambdas: tuple[float, ...] = ()
    couple_A: bool = True
    couple_B: bool = True
    center_B: float = 2.0
    tolerance: float = 1e-8


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    field_model: FieldModel
    detector_A: DetectorParams
    detector_B: DetectorParams
    p: float
    strategy: Strategy
    quadrature: QuadratureConfig
    coefficients: HarvestCoefficients | None
    sweep: SweepAxis | None
    nogo: NogoConfig
    seed: int = 0
    threads: int = 1
    out: str = "results"
    raw: dict = field(default_factory=dict, repr=False, compare=False)
    lines: dict = field(default_factory=dict, repr=False, compare=False)

    def at(self, value: float) -> "RunConfig":
        """Configuration for one sweep point."""
        if self.sweep is None:
            return self
        section, key = self.sweep.parameter.split(".", 1)
        raw = {s: dict(kv) for s, kv in self.raw.items()}
        conv = SCHEMA[section][key][0]
        raw.setdefault(section, {})[key] = repr(float(value)) if conv is float else str(int(round(value)))
        raw.pop("sweep", None)
        return replace(build(raw, self.lines), seed=self.seed, threads=self.threads, out=self.out)


def _where(lines: dict, section: str, key: str | None = None) -> str:
    n = lines.get((section, key)) or lines.get((section, None))
    loc = f"[{section}]" + (f" {key}" if key else "")
    return f"line {n}: {loc}" if n else loc


def _line_numbers(text: str) -> dict:
    """(section, key) -> 1-based line number, for diagnostics."""
    out: dict = {}
    section = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"^\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            out.setdefault((section, None), i)
            continue
        m = re.match(r"^([A-Za-z_][\w]*)\s*[=:]", s)
        if m and section is not None:
            out.setdefault((section, m.group(1)), i)
    return out


def parse_text(text: str) -> tuple[dict, dict]:
    """Raw {section: {key: str}} plus line numbers, from INI or JSON text."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
        if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
            raise ConfigError("JSON config must map section names to objects")
        raw = {s: {k: (v if isinstance(v, (list, str)) else json.dumps(v)) for k, v in kv.items()} for s, kv in data.items()}
        return raw, {}
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    raw = {s: dict(cp.items(s)) for s in cp.sections()}
    return raw, _line_numbers(text)


def load(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    raw, lines = parse_text(text)
    return build(raw, lines)


def _typed(raw: dict, lines: dict) -> dict[str, dict[str, Any]]:
    for section, kv in raw.items():
        if section not in SCHEMA:
            raise ConfigError(f"{_where(lines, section)}: unknown section")
        for key in kv:
            if key not in SCHEMA[section]:
                raise ConfigError(f"{_where(lines, section, key)}: unknown key")
    out: dict[str, dict[str, Any]] = {}
    for section, keys in SCHEMA.items():
        given = raw.get(section, {})
        vals = {}
        for key, (conv, default) in keys.items():
            if key in given:
                try:
                    vals[key] = conv(given[key])
                except (TypeError, ValueError):
                    raise ConfigError(f"{_where(lines, section, key)}: cannot parse {given[key]!r}") from None
            else:
                vals[key] = default
        out[section] = vals
    return out


def _require(vals: dict, section: str, key: str, lines: dict):
    if vals[section][key] is None:
        raise ConfigError(f"{_where(lines, section)}: missing required key '{key}'")
    return vals[section][key]


def _detector(label: str, v: dict, dim: int) -> DetectorParams:
    pos = (v["x"], v["y"], v["z"])[:dim]
    return DetectorParams(
        label, v["coupling"], v["gap"], pos, v["switching_center"], v["switching_width"], v["smearing_width"]
    )


def build(raw: dict, lines: dict | None = None) -> RunConfig:
    lines = lines or {}
    vals = _typed(raw, lines)
    scenario = _require(vals, "run", "scenario", lines)
    if scenario not in SCENARIOS:
        raise ConfigError(f"{_where(lines, 'run', 'scenario')}: scenario must be one of {', '.join(SCENARIOS)}")

    def guard(section, key, make):
        try:
            return make()
        except ValueError as exc:
            raise ConfigError(f"{_where(lines, section, key)}: {exc}") from None

    fm = guard("field", None, lambda: FieldModel(vals["field"]["dimension"], vals["field"]["mass"]))
    dim = fm.dimension
    det_a = guard("detector_A", None, lambda: _detector("A", vals["detector_A"], dim))
    det_b = guard("detector_B", None, lambda: _detector("B", vals["detector_B"], dim))
    quad = guard("quadrature", None, lambda: QuadratureConfig(**vals["quadrature"]))
    p = vals["input"]["p"]
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"{_where(lines, 'input', 'p')}: p must lie in [0, 1]")
    strategy = guard("strategy", "name", lambda: Strategy(vals["strategy"]["name"]))
    if strategy is Strategy.CUSTOM:
        raise ConfigError(f"{_where(lines, 'strategy', 'name')}: custom corrections are library-only")

    coeffs = None
    if "coefficients" in raw:
        c = vals["coefficients"]
        _require(vals, "coefficients", "L_AA", lines)
        _require(vals, "coefficients", "L_BB", lines)
        coeffs = guard("coefficients", None, lambda: HarvestCoefficients.from_dict(c))

    sweep = None
    if "sweep" in raw:
        s = vals["sweep"]
        for key in ("parameter", "start", "stop", "steps"):
            _require(vals, "sweep", key, lines)
        if "." not in s["parameter"]:
            raise ConfigError(f"{_where(lines, 'sweep', 'parameter')}: expected section.key")
        section, key = s["parameter"].split(".", 1)
        if section not in SCHEMA or key not in SCHEMA[section] or section in ("run", "sweep"):
            raise ConfigError(f"{_where(lines, 'sweep', 'parameter')}: unknown parameter {s['parameter']!r}")
        if SCHEMA[section][key][0] not in (float, int):
            raise ConfigError(f"{_where(lines, 'sweep', 'parameter')}: {s['parameter']} is not numeric")
        if s["steps"] < 1:
            raise ConfigError(f"{_where(lines, 'sweep', 'steps')}: range must be nonempty")
        sweep = SweepAxis(s["parameter"], s["start"], s["stop"], s["steps"])

    n = vals["nogo"]
    if n["model"] not in ("oscillator", "random"):
        raise ConfigError(f"{_where(lines, 'nogo', 'model')}: model must be oscillator or random")
    for key in ("count", "field_dim", "ancilla_dim", "system_dim"):
        if n[key] < 1:
            raise ConfigError(f"{_where(lines, 'nogo', key)}: must be positive")
    if n["field_dim"] * n["ancilla_dim"] * n["system_dim"] * 2 > 128:
        raise ConfigError(f"{_where(lines, 'nogo', 'field_dim')}: total dimension exceeds 128")
    nogo_cfg = NogoConfig(**n)

    run = vals["run"]
    if run["threads"] < 1:
        raise ConfigError(f"{_where(lines, 'run', 'threads')}: must be at least 1")
    if not 0 <= run["seed"] < 2**64:
        raise ConfigError(f"{_where(lines, 'run', 'seed')}: seed must be an unsigned 64-bit integer")
    return RunConfig(
        scenario, fm, det_a, det_b, p, strategy, quad, coeffs, sweep, nogo_cfg,
        run["seed"], run["threads"], run["out"], raw, lines,
    )

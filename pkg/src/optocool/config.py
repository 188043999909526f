"""Run configuration: TOML schema, defaults and validation.

A run file looks like::

    scenario = "cooling"

    [system.optical]
    frequency = 1.0
    truncation = 7

    [system.mechanical.1]
    frequency = 1e-7
    coupling = 1e-9
    truncation = 70

    [baths.H]
    temperature = 1e-3      # or: occupation = ... (Bose number at the mode frequency)
    coupling = 1e-8
    [baths.C]
    temperature = 1e-5
    coupling = 1e-8
    [baths.1]
    temperature = 2e-4
    coupling = 1e-12

    [solver]
    method = "analytic"     # analytic | reduced-ode | joint-steady-state | joint-evolve

    [sweep]
    parameter = "baths.H.temperature"
    start = 8.3
    stop = 8300
    points = 40
    spacing = "log"         # or give values = [...]

    [output]
    directory = "results"
    formats = ["csv", "json"]

Occupation-valued baths are converted to temperatures at the frequency
they refer to: ``w_a`` for H and C, ``w_i`` for resonator ``i``.
"""
from __future__ import annotations

import copy
import hashlib
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .fock import ModeSpec, SystemConfig, weak_coupling_warnings
from .spectra import FAMILIES, FILTER_MODES, SCENARIOS, BathSpec, FilterSpec, bose_occupation

log = logging.getLogger(__name__)

METHODS = ("analytic", "reduced-ode", "joint-steady-state", "joint-evolve")
FORMATS = ("csv", "json")
DEFAULT_OPTICAL_TRUNCATION = 5
DEFAULT_MECHANICAL_TRUNCATION = 30

_TOP_KEYS = {"preset", "scenario", "system", "baths", "solver", "sweep", "output"}
_OPTICAL_KEYS = {"frequency", "truncation"}
_MECH_KEYS = {"frequency", "coupling", "truncation"}
_BATH_KEYS = {"temperature", "occupation", "coupling", "family", "filter"}
_FILTER_KEYS = {"center", "mode", "width", "adaptive"}
_SOLVER_KEYS = {"method", "tolerance", "truncations", "t_final", "time_points", "workers"}
_SWEEP_KEYS = {"parameter", "values", "start", "stop", "points", "spacing"}
_OUTPUT_KEYS = {"directory", "formats"}


@dataclass(frozen=True)
class SolverSettings:
    method: str = "analytic"
    tolerance: float = 1e-9
    truncations: Optional[tuple] = None
    t_final: Optional[float] = None
    time_points: int = 50
    workers: int = 1


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "results"
    formats: tuple = FORMATS


@dataclass(frozen=True)
class RunConfig:
    system: SystemConfig
    baths: tuple
    scenario: str = "cooling"
    solver: SolverSettings = SolverSettings()
    sweep: Optional[SweepSpec] = None
    output: OutputSettings = OutputSettings()
    preset: str = "run"
    raw: dict = field(default_factory=dict, repr=False, compare=False)
    warnings: tuple = ()

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)

    def at(self, value: float) -> "RunConfig":
        """This configuration with the sweep parameter set to ``value`` and the sweep removed."""
        if self.sweep is None:
            return self
        raw = copy.deepcopy(self.raw)
        set_path(raw, self.sweep.parameter, float(value))
        raw.pop("sweep", None)
        return build_config(raw)


def config_hash(raw: dict) -> str:
    """Short digest of the physics and solver content; output location and worker count are excluded."""
    body = {k: v for k, v in raw.items() if k != "output"}
    if isinstance(body.get("solver"), dict):
        body["solver"] = {k: v for k, v in body["solver"].items() if k != "workers"}
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), default=float)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def get_path(raw: dict, path: str):
    node = raw
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            raise KeyError(path)
        node = node[part]
    return node


def set_path(raw: dict, path: str, value) -> None:
    parts = path.split(".")
    node = raw
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


class _Problems(list):
    def add(self, path, msg):
        self.append(f"{path}: {msg}")


def _number(table, key, path, problems, required=True, default=None, positive=False, nonneg=False):
    if key not in table:
        if required:
            problems.add(f"{path}.{key}", "missing required value")
        return default
    v = table[key]
    if not _is_number(v) or not math.isfinite(v):
        problems.add(f"{path}.{key}", f"expected a finite number, got {v!r}")
        return default
    if positive and not v > 0:
        problems.add(f"{path}.{key}", f"must be > 0, got {v}")
        return default
    if nonneg and not v >= 0:
        problems.add(f"{path}.{key}", f"must be >= 0, got {v}")
        return default
    return float(v)


def _integer(table, key, path, problems, default, minimum=1):
    if key not in table:
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        problems.add(f"{path}.{key}", f"expected an integer >= {minimum}, got {v!r}")
        return default
    return v


def _unknown(table, allowed, path, problems):
    for k in sorted(set(table) - allowed):
        problems.add(f"{path}.{k}" if path else k, "unknown key")


def _table(raw, key, path, problems) -> dict:
    v = raw.get(key, {})
    if not isinstance(v, dict):
        problems.add(path, f"expected a table, got {type(v).__name__}")
        return {}
    return v


def sweep_values(spec: dict, path: str, problems) -> tuple:
    """Explicit ``values`` or a ``start``/``stop``/``points`` grid with linear or log spacing."""
    if "values" in spec:
        if any(k in spec for k in ("start", "stop", "points", "spacing")):
            problems.add(path, "give either values or start/stop/points, not both")
        vals = spec["values"]
        if not isinstance(vals, list) or not vals:
            problems.add(f"{path}.values", "must be a non-empty list")
            return ()
        bad = [k for k, v in enumerate(vals) if not _is_number(v) or not math.isfinite(v)]
        for k in bad:
            problems.add(f"{path}.values[{k}]", f"expected a finite number, got {vals[k]!r}")
        return () if bad else tuple(float(v) for v in vals)
    start = _number(spec, "start", path, problems)
    stop = _number(spec, "stop", path, problems)
    points = _integer(spec, "points", path, problems, 40)
    spacing = spec.get("spacing", "log")
    if spacing not in ("log", "linear"):
        problems.add(f"{path}.spacing", f"must be 'log' or 'linear', got {spacing!r}")
        return ()
    if start is None or stop is None:
        return ()
    if spacing == "log":
        if not (start > 0 and stop > 0):
            problems.add(path, "log spacing needs start and stop > 0")
            return ()
        grid = np.geomspace(start, stop, points)
    else:
        grid = np.linspace(start, stop, points)
    return tuple(float(v) for v in grid)


def _parse_filter(spec, path, problems) -> Optional[FilterSpec]:
    if not isinstance(spec, dict):
        problems.add(path, "expected a table")
        return None
    _unknown(spec, _FILTER_KEYS, path, problems)
    center = _number(spec, "center", path, problems, positive=True)
    width = _number(spec, "width", path, problems, required=False, default=1e-7, positive=True)
    mode = spec.get("mode", "hard-window")
    if mode not in FILTER_MODES:
        problems.add(f"{path}.mode", f"must be one of {FILTER_MODES}, got {mode!r}")
        return None
    adaptive = spec.get("adaptive", True)
    if not isinstance(adaptive, bool):
        problems.add(f"{path}.adaptive", "must be true or false")
        return None
    if center is None or width is None:
        return None
    return FilterSpec(center=center, mode=mode, width=width, adaptive=adaptive)


def _parse_bath(label, spec, frequency, path, problems) -> Optional[BathSpec]:
    if not isinstance(spec, dict):
        problems.add(path, "expected a table")
        return None
    _unknown(spec, _BATH_KEYS, path, problems)
    coupling = _number(spec, "coupling", path, problems, nonneg=True)
    family = spec.get("family", "ohmic")
    if family not in FAMILIES:
        problems.add(f"{path}.family", f"must be one of {FAMILIES}, got {family!r}")
    has_t, has_n = "temperature" in spec, "occupation" in spec
    if has_t == has_n:
        problems.add(path, "give exactly one of temperature or occupation")
        temperature = None
    elif has_t:
        temperature = _number(spec, "temperature", path, problems, positive=True)
    else:
        occ = _number(spec, "occupation", path, problems, positive=True)
        temperature = None if occ is None or frequency is None else frequency / math.log1p(1.0 / occ)
    flt = None
    if "filter" in spec:
        if label not in ("H", "C"):
            problems.add(f"{path}.filter", "only optical baths (H, C) can be filtered")
        else:
            flt = _parse_filter(spec["filter"], f"{path}.filter", problems)
    if temperature is None or coupling is None or family not in FAMILIES:
        return None
    return BathSpec(label, temperature, coupling, family=family, filter=flt)


def validate(raw: dict) -> tuple:
    """Turn a raw mapping into ``(RunConfig, problems)``; the config is None if anything failed."""
    problems = _Problems()
    if not isinstance(raw, dict):
        return None, ["<root>: expected a table"]
    _unknown(raw, _TOP_KEYS, "", problems)
    preset = raw.get("preset", "run")
    if not isinstance(preset, str) or not re.fullmatch(r"[A-Za-z0-9_.-]+", preset):
        problems.add("preset", "must be a simple name (letters, digits, _ . -)")
        preset = "run"
    scenario = raw.get("scenario", "cooling")
    if scenario not in SCENARIOS:
        problems.add("scenario", f"must be one of {SCENARIOS}, got {scenario!r}")

    system = _table(raw, "system", "system", problems)
    _unknown(system, {"optical", "mechanical"}, "system", problems)
    opt = _table(system, "optical", "system.optical", problems)
    _unknown(opt, _OPTICAL_KEYS, "system.optical", problems)
    wa = _number(opt, "frequency", "system.optical", problems, required=False, default=1.0, positive=True)
    ta = _integer(opt, "truncation", "system.optical", problems, DEFAULT_OPTICAL_TRUNCATION, minimum=2)

    mech = _table(system, "mechanical", "system.mechanical", problems)
    labels = sorted(mech, key=lambda k: int(k) if str(k).isdigit() else 0)
    if not mech:
        problems.add("system.mechanical", "at least one resonator table [system.mechanical.1] is required")
    expected = [str(i) for i in range(1, len(mech) + 1)]
    if labels != expected:
        problems.add("system.mechanical", f"resonators must be numbered 1..N, got {list(mech)}")
    modes, couplings = [], []
    for lab in labels:
        path = f"system.mechanical.{lab}"
        spec = mech[lab]
        if not isinstance(spec, dict):
            problems.add(path, "expected a table")
            continue
        _unknown(spec, _MECH_KEYS, path, problems)
        w = _number(spec, "frequency", path, problems, positive=True)
        g = _number(spec, "coupling", path, problems, nonneg=True)
        t = _integer(spec, "truncation", path, problems, DEFAULT_MECHANICAL_TRUNCATION, minimum=2)
        modes.append(None if w is None else ModeSpec(lab, w, t))
        couplings.append(g)

    solver_raw = _table(raw, "solver", "solver", problems)
    _unknown(solver_raw, _SOLVER_KEYS, "solver", problems)
    method = solver_raw.get("method", "analytic")
    if method not in METHODS:
        problems.add("solver.method", f"must be one of {METHODS}, got {method!r}")
    tol = _number(solver_raw, "tolerance", "solver", problems, required=False, default=1e-9, positive=True)
    t_final = _number(solver_raw, "t_final", "solver", problems, required=False, positive=True)
    time_points = _integer(solver_raw, "time_points", "solver", problems, 50, minimum=2)
    workers = _integer(solver_raw, "workers", "solver", problems, 1)
    truncs = solver_raw.get("truncations")
    if truncs is not None:
        n_modes = 1 + len(mech)
        if (
            not isinstance(truncs, list)
            or len(truncs) != n_modes
            or any(isinstance(t, bool) or not isinstance(t, int) or t < 2 for t in truncs)
        ):
            problems.add("solver.truncations", f"expected {n_modes} integers >= 2 (cavity first), got {truncs!r}")
            truncs = None
        else:
            truncs = tuple(truncs)
    if method == "joint-evolve" and t_final is None:
        problems.add("solver.t_final", "required for method joint-evolve")

    system_cfg = None
    if wa is not None and modes and None not in modes and None not in couplings and labels == expected:
        try:
            system_cfg = SystemConfig(ModeSpec("a", wa, ta), tuple(modes), tuple(couplings))
            if truncs is not None:
                system_cfg = system_cfg.with_truncations(truncs)
        except ValueError as exc:
            problems.add("system", str(exc))

    baths_raw = _table(raw, "baths", "baths", problems)
    roles = ["H", "C"] + expected
    for k in sorted(set(baths_raw) - set(roles)):
        problems.add(f"baths.{k}", "unknown bath role")
    baths = []
    for role in roles:
        if role not in baths_raw:
            problems.add(f"baths.{role}", "missing bath")
            continue
        if role in ("H", "C"):
            freq = wa
        else:
            m = modes[int(role) - 1] if int(role) - 1 < len(modes) else None
            freq = m.frequency if m is not None else None
        try:
            b = _parse_bath(role, baths_raw[role], freq, f"baths.{role}", problems)
        except ValueError as exc:
            problems.add(f"baths.{role}", str(exc))
            b = None
        baths.append(b)

    sweep = None
    if "sweep" in raw:
        spec = raw["sweep"]
        if not isinstance(spec, dict):
            problems.add("sweep", "expected a table")
        else:
            _unknown(spec, _SWEEP_KEYS, "sweep", problems)
            param = spec.get("parameter")
            values = sweep_values(spec, "sweep", problems)
            if not isinstance(param, str):
                problems.add("sweep.parameter", "missing dotted parameter path")
            else:
                try:
                    target = get_path(raw, param)
                except KeyError:
                    problems.add("sweep.parameter", f"{param!r} does not resolve to a configured field")
                else:
                    if not _is_number(target) or param.startswith(("sweep", "output", "solver")):
                        problems.add("sweep.parameter", f"{param!r} is not a numeric physics field")
                    elif values:
                        _check_sweep_values(raw, param, values, problems)
                        sweep = SweepSpec(param, values)

    out_raw = _table(raw, "output", "output", problems)
    _unknown(out_raw, _OUTPUT_KEYS, "output", problems)
    directory = out_raw.get("directory", "results")
    if not isinstance(directory, str) or not directory:
        problems.add("output.directory", "must be a non-empty path string")
    formats = out_raw.get("formats", list(FORMATS))
    if not isinstance(formats, list) or not formats or not set(formats) <= set(FORMATS):
        problems.add("output.formats", f"must be a non-empty subset of {FORMATS}, got {formats!r}")
        formats = list(FORMATS)

    if problems:
        return None, list(problems)
    warnings = tuple(
        weak_coupling_warnings(
            system_cfg,
            [bose_occupation(system_cfg.resonator(i).frequency, baths[1 + i].temperature)
             for i in range(1, system_cfg.n_resonators + 1)],
        )
    )
    cfg = RunConfig(
        system=system_cfg,
        baths=tuple(baths),
        scenario=scenario,
        solver=SolverSettings(method, tol, truncs, t_final, time_points, workers),
        sweep=sweep,
        output=OutputSettings(directory, tuple(dict.fromkeys(formats))),
        preset=preset,
        raw=copy.deepcopy(raw),
        warnings=warnings,
    )
    return cfg, []


def _check_sweep_values(raw, param, values, problems):
    """Every sweep value must itself yield a valid configuration."""
    for k, v in enumerate(values):
        trial = copy.deepcopy(raw)
        trial.pop("sweep")
        set_path(trial, param, v)
        _, errs = validate(trial)
        for e in errs:
            problems.add(f"sweep.values[{k}]", f"value {v!r} invalid ({e})")


def build_config(raw: dict) -> RunConfig:
    """Validate ``raw`` and raise :class:`ConfigError` listing every problem."""
    cfg, problems = validate(raw)
    if problems:
        raise ConfigError(problems)
    return cfg


def read_raw(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror or exc})") from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from exc


def load_config(path) -> RunConfig:
    """Read, validate and default a TOML run file. Weak-coupling warnings are logged and kept on the result."""
    cfg = build_config(read_raw(path))
    for w in cfg.warnings:
        log.warning(w)
    return cfg


def dump_toml(raw: dict) -> str:
    """Minimal TOML writer for the nested dict/number/string/list configs used here."""
    lines = []

    def scalar(v):
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, str):
            return json.dumps(v)
        if isinstance(v, float):
            return repr(v)
        if isinstance(v, list):
            return "[" + ", ".join(scalar(x) for x in v) + "]"
        return str(v)

    def emit(table, prefix):
        plain = {k: v for k, v in table.items() if not isinstance(v, dict)}
        nested = {k: v for k, v in table.items() if isinstance(v, dict)}
        if prefix and plain:
            lines.append(f"[{prefix}]")
        for k, v in plain.items():
            lines.append(f"{k} = {scalar(v)}")
        if plain:
            lines.append("")
        for k, v in nested.items():
            emit(v, f"{prefix}.{k}" if prefix else k)

    emit(raw, "")
    return "\n".join(lines).rstrip() + "\n"

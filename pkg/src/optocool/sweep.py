"""Parameter sweeps over a :class:`RunConfig` and persistence of their results."""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .config import RunConfig
from .errors import InstabilityError
from .fock import embed, make_number, product_state, thermal_state
from .master import build_scenario
from .rates import (
    cavity_occupation_ss,
    phonon_rhs,
    phonon_ss_cooling,
    resonator_rates,
)
from .solvers import evolve, expectation, steady_state
from .spectra import bose_occupation, with_default_filters

log = logging.getLogger(__name__)

# omega_a = 2 pi x 1e14 Hz sets the unit of frequency; reference only
OMEGA_A_SI = 2 * math.pi * 1e14
HBAR = 1.054571817e-34
K_B = 1.380649e-23
SHORT_NAMES = {"baths.H.temperature": "T_h", "baths.C.temperature": "T_c"}


def si_table() -> dict:
    """Unit conversions for the dimensionless quantities, written into the manifest."""
    kelvin = HBAR * OMEGA_A_SI / K_B
    return {
        "omega_a_rad_per_s": OMEGA_A_SI,
        "frequency_unit_Hz": OMEGA_A_SI / (2 * math.pi),
        "temperature_unit_K": kelvin,
        "time_unit_s": 1 / OMEGA_A_SI,
        "note": "multiply a dimensionless temperature by temperature_unit_K to get kelvin",
    }


@dataclass
class PointResult:
    value: Optional[float]
    observables: dict = field(default_factory=dict)
    residual: Optional[float] = None
    flags: list = field(default_factory=list)
    error: Optional[str] = None
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class SweepResult:
    parameter: Optional[str]
    points: list
    method: str
    config_hash: str
    preset: str
    wall_seconds: float = 0.0

    @property
    def n_failed(self) -> int:
        return sum(p.failed for p in self.points)

    def column(self, name: str) -> np.ndarray:
        return np.array([p.observables.get(name, math.nan) for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([math.nan if p.value is None else p.value for p in self.points])


def observable_names(config: RunConfig) -> list:
    n = config.system.n_resonators
    return [f"n{i}_ss" for i in range(1, n + 1)] + ["na_ss"]


def _baths(config: RunConfig):
    return with_default_filters(config.scenario, config.system, config.baths)


def _analytic(config: RunConfig) -> PointResult:
    baths = _baths(config)
    na = cavity_occupation_ss(config.system, baths, config.scenario)
    res = PointResult(None, {"na_ss": na})
    for i in range(1, config.system.n_resonators + 1):
        rates = resonator_rates(i, config.scenario, config.system, baths, na)
        res.extra[f"Gamma{i}"] = rates.Gamma
        res.extra[f"kappa{i}"] = rates.kappa
        res.extra[f"A_minus{i}"] = rates.A_minus
        res.extra[f"A_plus{i}"] = rates.A_plus
        try:
            res.observables[f"n{i}_ss"] = phonon_ss_cooling(rates)
        except InstabilityError:
            res.observables[f"n{i}_ss"] = math.nan
            res.flags.append(f"unstable:{i}")
    return res


def _reduced_ode(config: RunConfig) -> PointResult:
    """Integrate each resonator's two-rate equation from its bath occupation to ``t_final``.

    Without ``t_final`` the horizon is 40 relaxation times ``1 / (Gamma + kappa)``.
    """
    baths = _baths(config)
    na = cavity_occupation_ss(config.system, baths, config.scenario)
    res = PointResult(None, {"na_ss": na})
    worst = 0.0
    for i in range(1, config.system.n_resonators + 1):
        rates = resonator_rates(i, config.scenario, config.system, baths, na)
        total = rates.Gamma + rates.kappa
        t_final = config.solver.t_final or (40.0 / abs(total) if total else 1.0)
        sol = solve_ivp(
            lambda t, y: [phonon_rhs(rates, y[0])],
            (0.0, t_final),
            [rates.nbar],
            method="LSODA",
            rtol=1e-10,
            atol=1e-14,
        )
        if not sol.success:
            raise RuntimeError(f"resonator {i}: {sol.message}")
        n_end = float(sol.y[0, -1])
        res.observables[f"n{i}_ss"] = n_end
        if total <= 0:
            res.flags.append(f"unstable:{i}")
        scale = (rates.A_minus + rates.A_th_minus) * max(n_end, 1.0)
        worst = max(worst, abs(phonon_rhs(rates, n_end)) / scale if scale else 0.0)
    res.residual = worst
    return res


def _joint_steady(config: RunConfig) -> PointResult:
    L = build_scenario(config.scenario, config.system, _baths(config))
    ss = steady_state(L, tol=config.solver.tolerance)
    res = PointResult(None, residual=ss.residual)
    for k, label in enumerate(L.mode_labels):
        n_op = embed(make_number(config.system.dims[k]), k, config.system)
        res.observables["na_ss" if label == "a" else f"n{label}_ss"] = expectation(ss.state, n_op)
    res.flags.extend(f"truncation:{lab}" for lab in ss.truncation_flags)
    return res


def _initial_state(config: RunConfig):
    """Product of thermal states at each mode's own bath occupation (cavity: cold bath at ``w_a``)."""
    sys_ = config.system
    roles = {b.label: b for b in config.baths}
    states = [thermal_state(sys_.optical.truncation, bose_occupation(sys_.optical.frequency, roles["C"].temperature))]
    for i in range(1, sys_.n_resonators + 1):
        m = sys_.resonator(i)
        states.append(thermal_state(m.truncation, bose_occupation(m.frequency, roles[str(i)].temperature)))
    return product_state(states)


def _joint_evolve(config: RunConfig) -> PointResult:
    L = build_scenario(config.scenario, config.system, _baths(config))
    times = np.linspace(0.0, config.solver.t_final, config.solver.time_points)
    traj = evolve(L, _initial_state(config), times)
    res = PointResult(None)
    for label in L.mode_labels:
        name = "na_ss" if label == "a" else f"n{label}_ss"
        res.observables[name] = float(traj.observables[f"n_{label}"][-1])
        if np.max(traj.observables[f"top_{label}"]) > 1e-6:
            res.flags.append(f"truncation:{label}")
    res.residual = float(np.abs(L.apply(traj.final_state)).max() / max(abs(L.superoperator).max(), 1e-300))
    res.extra["trajectory"] = {k: v.tolist() for k, v in traj.observables.items() if k.startswith("n_")}
    res.extra["times"] = times.tolist()
    return res


RUNNERS = {
    "analytic": _analytic,
    "reduced-ode": _reduced_ode,
    "joint-steady-state": _joint_steady,
    "joint-evolve": _joint_evolve,
}


def run_point(config: RunConfig, value: Optional[float]) -> PointResult:
    """One sweep point; any exception becomes an error record instead of propagating."""
    start = time.perf_counter()
    try:
        point_cfg = config.at(value) if value is not None else config
        res = RUNNERS[point_cfg.solver.method](point_cfg)
    except Exception as exc:  # robustness: a failed point must not abort the sweep
        res = PointResult(None, error=f"{type(exc).__name__}: {exc}")
        res.flags.append(f"error:{type(exc).__name__}")
        log.warning("point %r failed: %s", value, res.error)
    res.value = value
    res.seconds = time.perf_counter() - start
    return res


def run_sweep(config: RunConfig, workers: Optional[int] = None) -> SweepResult:
    """Run every sweep point, in parallel when ``workers > 1``; records come back ordered by sweep value."""
    workers = workers or config.solver.workers
    values = list(config.sweep.values) if config.sweep else [None]
    start = time.perf_counter()
    if workers > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(run_point, [config] * len(values), values))
    else:
        points = [run_point(config, v) for v in values]
    if config.sweep:
        order = sorted(range(len(points)), key=lambda k: (values[k], k))
        points = [points[k] for k in order]
    return SweepResult(
        parameter=config.sweep.parameter if config.sweep else None,
        points=points,
        method=config.solver.method,
        config_hash=config.config_hash,
        preset=config.preset,
        wall_seconds=time.perf_counter() - start,
    )


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return "%.16e" % x


def csv_text(result: SweepResult, config: RunConfig) -> str:
    """CSV body: sweep parameter, observables, residual (non-analytic methods), flags."""
    param = SHORT_NAMES.get(result.parameter, result.parameter) if result.parameter else "point"
    names = observable_names(config)
    with_residual = result.method != "analytic"
    header = [param] + names + (["residual"] if with_residual else []) + ["flags"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for k, p in enumerate(result.points):
        row = [_fmt(p.value) if result.parameter else str(k)]
        row += [_fmt(p.observables.get(n)) for n in names]
        if with_residual:
            row.append(_fmt(p.residual))
        row.append(";".join(p.flags))
        writer.writerow(row)
    return buf.getvalue()


def manifest(result: SweepResult, config: RunConfig) -> dict:
    from . import __version__

    return {
        "preset": config.preset,
        "config_hash": result.config_hash,
        "tool_version": f"optocool {__version__}",
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "method": result.method,
        "scenario": config.scenario,
        "sweep_parameter": result.parameter,
        "config": config.raw,
        "warnings": list(config.warnings),
        "wall_seconds": result.wall_seconds,
        "n_points": len(result.points),
        "n_failed": result.n_failed,
        "si_units": si_table(),
        "points": [asdict(p) for p in result.points],
    }


def output_stem(result: SweepResult) -> str:
    return f"{result.preset}_{result.config_hash}"


def emit(result: SweepResult, config: RunConfig, directory=None) -> list:
    """Write ``<preset>_<hash>.csv`` and/or ``.json`` and return the paths written."""
    out = Path(directory or config.output.directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    stem = output_stem(result)
    for fmt in config.output.formats:
        path = out / f"{stem}.{fmt}"
        text = csv_text(result, config) if fmt == "csv" else json.dumps(
            manifest(result, config), indent=2, default=_json_default, allow_nan=True
        )
        try:
            path.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")

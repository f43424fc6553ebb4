"""Execute scenario configurations and collect tabular results."""

from __future__ import annotations

import datetime as _dt
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Optional

import numpy as np

from .. import __version__, bloch, hermitian, ptsym
from ..errors import QbrachError
from .config import ScenarioConfig
from .emit import SweepResult

COLUMNS = {
    "evolve": [
        "index", "t", "exact_x", "exact_y", "exact_z", "ode_x", "ode_y", "ode_z",
        "residual", "drift", "error",
    ],
    "passage": [
        "index", "theta", "axis_x", "axis_y", "axis_z", "time", "closed_form", "residual", "error",
    ],
    "round-trip": [
        "index", "theta", "axis_x", "axis_y", "axis_z", "time", "closed_form", "residual", "error",
    ],
    "pt-sweep": [
        "index", "alpha", "r", "s", "theta", "omega", "dS1", "dS2",
        "t1", "t1_closed", "t1_residual", "t2", "t2_closed", "t2_residual",
        "round_trip", "round_trip_closed", "round_trip_residual", "error",
    ],
    "optimize": [
        "index", "grid", "axis_x", "axis_y", "axis_z", "time", "closed_form", "residual",
        "axis_tilt", "error",
    ],
}


def _residual(value: Optional[float], closed: float) -> Optional[float]:
    return None if value is None else value - closed


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the timestamp for reproducible artifacts.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        moment = _dt.datetime.now(tz=_dt.timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


def _theta_grid(p) -> list[float]:
    n = p["theta_count"]
    return [p["theta"] + 2 * math.pi * k / n for k in range(n)]


def _sweep_grid(p, prefix: str) -> list[float]:
    lo, hi, n = p[f"{prefix}_min"], p[f"{prefix}_max"], p[f"{prefix}_count"]
    if n == 1:
        return [float(lo)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def _evolve_tasks(p) -> list[Callable[[], dict]]:
    H = hermitian.build_optimal_hamiltonian(p["P_I"], p["P_F"], p["deltaE"], p["O0"], p["theta"])
    t_max = p["t_max"] if p["t_max"] is not None else hermitian.default_t_max(H.gap)
    P0 = np.array(p["P_I"])
    psi0 = bloch.bloch_to_state(P0)
    times = np.linspace(0.0, t_max, p["time_count"]) if p["time_count"] > 1 else np.array([t_max])

    def task(t: float) -> dict:
        exact = bloch.state_to_bloch(bloch.normalize(hermitian.evolve_state(H, psi0, t)))
        ode, drift = hermitian.evolve_bloch_ode(H, P0, t, p["steps"], return_drift=True)
        return {
            "t": t,
            **{f"exact_{c}": float(v) for c, v in zip("xyz", exact)},
            **{f"ode_{c}": float(v) for c, v in zip("xyz", ode)},
            "residual": float(np.max(np.abs(ode - exact))),
            "drift": drift,
        }

    return [lambda t=float(t): task(t) for t in times]


def _transport_tasks(p, round_trip: bool) -> list[Callable[[], dict]]:
    psi_I = bloch.bloch_to_state(p["P_I"])
    psi_F = bloch.bloch_to_state(p["P_F"])

    def task(theta: float) -> dict:
        row: dict[str, Any] = {"theta": theta}
        H = hermitian.build_optimal_hamiltonian(p["P_I"], p["P_F"], p["deltaE"], p["O0"], theta)
        row.update({f"axis_{c}": float(v) for c, v in zip("xyz", H.axis)})
        if round_trip:
            closed = math.pi / p["deltaE"]
            value = hermitian.round_trip_time(H, psi_I, psi_F, p["t_max"])
        else:
            closed = hermitian.transport_metrics(psi_I, psi_F, H).time
            value = hermitian.passage_time(H, psi_I, psi_F, p["t_max"])
        row.update(time=value, closed_form=closed, residual=_residual(value, closed))
        return row

    return [lambda th=th: task(th) for th in _theta_grid(p)]


def _pt_row(H: ptsym.PTHamiltonian, t_max: Optional[float]) -> dict:
    row: dict[str, Any] = {"r": H.r, "s": H.s, "theta": H.theta}
    spectrum = ptsym.pt_spectrum(H)
    d1, d2 = ptsym.nqm_distances(spectrum.alpha)
    speed = spectrum.omega
    psi_I, psi_F = ptsym.short_leg_endpoints(spectrum.alpha)
    t1 = ptsym.pt_passage_time(H, psi_I, psi_F, t_max)
    t2 = ptsym.pt_passage_time(H, psi_F, psi_I, t_max)
    rt = ptsym.pt_round_trip_time(H, psi_I, psi_F, t_max)
    t1c, t2c, rtc = d1 / speed, d2 / speed, 2 * math.pi / speed
    row.update(
        alpha=spectrum.alpha, omega=spectrum.omega, dS1=d1, dS2=d2,
        t1=t1, t1_closed=t1c, t1_residual=_residual(t1, t1c),
        t2=t2, t2_closed=t2c, t2_residual=_residual(t2, t2c),
        round_trip=rt, round_trip_closed=rtc, round_trip_residual=_residual(rt, rtc),
    )
    return row


def _pt_tasks(p) -> list[Callable[[], dict]]:
    tasks = []
    if p["family"] == "alpha":
        for alpha in _sweep_grid(p, "alpha"):
            def task(alpha=alpha):
                H = ptsym.build_pt_from_alpha(alpha, p["deltaE"], p["rcos_offset"])
                return _pt_row(H, p["t_max"])
            tasks.append(task)
    else:
        for ratio in _sweep_grid(p, "ratio"):
            def task(ratio=ratio):
                H = ptsym.PTHamiltonian(r=ratio * p["s"], s=p["s"], theta=p["theta"], offset=p["rcos_offset"])
                try:
                    return _pt_row(H, p["t_max"])
                except QbrachError as exc:
                    return {"r": H.r, "s": H.s, "theta": H.theta, "error": _describe(exc)}
            tasks.append(task)
    return tasks


def _optimize_tasks(p) -> list[Callable[[], dict]]:
    def task() -> dict:
        axis, time = hermitian.brute_force_min_passage(p["P_I"], p["P_F"], p["deltaE"], p["grid"], p["seed"])
        psi_I, psi_F = bloch.bloch_to_state(p["P_I"]), bloch.bloch_to_state(p["P_F"])
        closed = bloch.fs_distance(psi_I, psi_F) / (2 * p["deltaE"])
        tilt = math.asin(min(1.0, abs(float(axis @ np.array(p["P_I"])))))
        return {
            "grid": p["grid"],
            **{f"axis_{c}": float(v) for c, v in zip("xyz", axis)},
            "time": time, "closed_form": closed, "residual": time - closed, "axis_tilt": tilt,
        }

    return [task]


def _tasks(cfg: ScenarioConfig) -> list[Callable[[], dict]]:
    p = cfg.parameters
    if cfg.kind == "evolve":
        return _evolve_tasks(p)
    if cfg.kind == "passage":
        return _transport_tasks(p, round_trip=False)
    if cfg.kind == "round-trip":
        return _transport_tasks(p, round_trip=True)
    if cfg.kind == "pt-sweep":
        return _pt_tasks(p)
    return _optimize_tasks(p)


def _describe(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _run_one(index: int, task: Callable[[], dict]) -> dict:
    try:
        row = task()
    except QbrachError as exc:
        row = {"error": _describe(exc)}
    row["index"] = index
    return row


def run_scenario(cfg: ScenarioConfig, workers: Optional[int] = None) -> SweepResult:
    """Run every grid point of ``cfg``; rows are ordered by grid index.

    Module errors are recorded in the row's ``error`` column rather than
    aborting the sweep. ``workers > 1`` evaluates rows in a thread pool.
    """
    columns = COLUMNS[cfg.kind]
    tasks = _tasks(cfg)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_one, range(len(tasks)), tasks))
    else:
        rows = [_run_one(i, t) for i, t in enumerate(tasks)]
    rows = [{c: row.get(c) for c in columns} for row in rows]
    metadata = {
        "tool": "qbrach",
        "version": __version__,
        "kind": cfg.kind,
        "config_digest": cfg.digest,
        "timestamp": _timestamp(),
    }
    return SweepResult(columns=columns, rows=rows, metadata=metadata)

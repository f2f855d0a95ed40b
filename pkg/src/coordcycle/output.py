"""Flat-file serialization of runs: CSV trajectories and JSON reports.

Floats are written with 17 significant digits, which uniquely identifies a
double, so reading a trajectory back reproduces every sample bit-exactly.
Nothing here emits timestamps or environment data: identical inputs yield
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .analysis import OrbitReport, StabilityReport
from .solver import CrossingDirection, CrossingEvent, Trajectory


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    """Write samples as ``t,x,y`` (plus ``a,b,c,d`` in full-matrix mode)."""
    path = Path(path)
    full = traj.payoff_paths is not None
    lines = ["t,x,y,a,b,c,d" if full else "t,x,y"]
    for i in range(len(traj)):
        row = [_fmt(traj.t[i]), _fmt(traj.x[i]), _fmt(traj.y[i])]
        if full:
            row.extend(_fmt(v) for v in traj.payoff_paths[i])
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_crossings_csv(traj: Trajectory, path: Path) -> None:
    """Write diagonal crossings as ``n,t,x,direction``."""
    path = Path(path)
    lines = ["n,t,x,direction"]
    for n, c in enumerate(traj.crossings):
        lines.append(f"{n},{_fmt(c.t)},{_fmt(c.x)},{c.direction.value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_trajectory_csv(path: Path) -> dict[str, np.ndarray]:
    """Read a trajectory CSV back into column arrays, bit-exact."""
    lines = Path(path).read_text(encoding="utf-8").strip().split("\n")
    header = lines[0].split(",")
    columns: dict[str, list[float]] = {name: [] for name in header}
    for line in lines[1:]:
        for name, cell in zip(header, line.split(",")):
            columns[name].append(float(cell))
    return {name: np.asarray(vals) for name, vals in columns.items()}


def read_crossings_csv(path: Path) -> list[CrossingEvent]:
    lines = Path(path).read_text(encoding="utf-8").strip().split("\n")
    events = []
    for line in lines[1:]:
        _, t, x, direction = line.split(",")
        events.append(CrossingEvent(t=float(t), x=float(x),
                                    direction=CrossingDirection(direction)))
    return events


def _complex_pair(z: complex) -> dict[str, float]:
    return {"re": z.real, "im": z.imag}


def stability_payload(report: StabilityReport) -> dict[str, Any]:
    return {
        "steady_state": {"x": report.steady_state.x, "y": report.steady_state.y},
        "classification": report.classification,
        "eta_star": report.eta_star,
        "eigenvalues": ([_complex_pair(z) for z in report.eigenvalues]
                        if report.eigenvalues is not None else None),
        "jacobian": (report.jacobian.tolist()
                     if report.jacobian is not None else None),
    }


def orbit_payload(report: OrbitReport | None) -> dict[str, Any] | None:
    if report is None:
        return None
    return {
        "converged": report.converged,
        "upper_tail": list(report.upper_tail),
        "lower_tail": list(report.lower_tail),
        "residual": report.residual,
        "orbit_width_lower_bound": report.orbit_width_lower_bound,
        "measured_width": report.measured_width,
    }


def write_json_report(payload: dict[str, Any], path: Path) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8",
    )

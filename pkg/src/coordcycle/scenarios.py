"""Scenario definitions, the golden runs reproducing the reference figures,
parameter sweeps, and structured-config loading.

A scenario bundles a dynamic, model parameters, an initial state, and
integrator settings.  The golden registry pins the parameter sets of the
figure scenarios so the whole set is reproducible with one command; the
acceptance suite exercises the same registry.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

import yaml

from . import output
from .analysis import (InsufficientCrossingsError, OrbitReport,
                       StabilityReport, classify_stability, detect_orbit,
                       lyapunov_along)
from .fields import DynamicKind
from .game import DomainError, JointState, ModelParams
from .portraits import PortraitStyle, write_phase_portrait
from .solver import (ConfigError, IntegratorConfig, TERM_DIVERGENCE,
                     Trajectory, integrate)

SCHEMA_VERSION = 1

OUTCOME_DIVERGED = "diverged"
OUTCOME_SINK = "sink"
OUTCOME_REPELLING = "repelling"
OUTCOME_ORBIT = "orbit_converged"
OUTCOME_CENTER = "center_threshold"

_VALID_OUTPUTS = ("csv", "json", "svg")
_SWEEP_AXES = ("r", "k", "s", "eta")


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: DynamicKind
    params: ModelParams
    initial: JointState
    integrator: IntegratorConfig = IntegratorConfig()
    outputs: tuple[str, ...] = _VALID_OUTPUTS

    def __post_init__(self):
        bad = [o for o in self.outputs if o not in _VALID_OUTPUTS]
        if bad:
            raise ConfigError(f"scenario {self.name!r}: unknown outputs {bad}")


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axis: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.axis not in _SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {_SWEEP_AXES}, "
                              f"got {self.axis!r}")
        for v in self.values:
            self.params_for(v)  # every swept value must be a valid config

    def params_for(self, value: float) -> ModelParams:
        try:
            return dataclasses.replace(self.base.params, **{self.axis: value})
        except DomainError as exc:
            raise ConfigError(
                f"sweep value {self.axis}={value!r} is invalid: {exc}") from exc


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    trajectory: Trajectory
    stability: StabilityReport
    orbit: Optional[OrbitReport]
    lyapunov: Optional[dict[str, float]]
    outcome: str
    files: tuple[Path, ...] = ()


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    outcome: str
    eta_star: Optional[float]
    measured_width: Optional[float]
    width_lower_bound: Optional[float]
    crossings: int
    termination: str


# ---------------------------------------------------------------------------
# Golden scenarios (reference-figure parameter sets)
# ---------------------------------------------------------------------------


def _br_golden(name: str, r: float, sample_dt: float) -> Scenario:
    return Scenario(
        name=name,
        kind=DynamicKind.BEST_RESPONSE,
        params=ModelParams(r=r, k=0.6, x_hat=0.2, s=1.0),
        initial=JointState(0.8, 0.65),
        integrator=IntegratorConfig(max_time=5000.0, max_crossings=60,
                                    sample_dt=sample_dt),
    )


def _logit_golden(name: str, r: float, eta: float, max_time: float) -> Scenario:
    return Scenario(
        name=name,
        kind=DynamicKind.LOGIT,
        params=ModelParams(r=r, k=0.6, x_hat=0.2, s=1.0, eta=eta),
        initial=JointState(0.4, 0.6),
        integrator=IntegratorConfig(max_time=max_time, sample_dt=0.05),
    )


GOLDEN_SCENARIOS: dict[str, Scenario] = {
    sc.name: sc
    for sc in [
        _br_golden("fig4_br_r0p1", r=0.1, sample_dt=0.25),
        _br_golden("fig4_br_r3p5", r=3.5, sample_dt=0.05),
        _br_golden("fig4_br_r7", r=7.0, sample_dt=0.05),
        Scenario(
            name="fig6_logit_trap",
            kind=DynamicKind.LOGIT,
            params=ModelParams(r=0.25, k=0.6, x_hat=0.2, s=1.25, eta=0.25),
            initial=JointState(0.9, 0.6),
            integrator=IntegratorConfig(max_time=400.0, sample_dt=0.05),
        ),
        _logit_golden("fig7_logit_unstable_r0p1", r=0.1, eta=1 / 6, max_time=400.0),
        _logit_golden("fig7_logit_unstable_r1p5", r=1.5, eta=1 / 6, max_time=400.0),
        _logit_golden("fig7_logit_unstable_r10", r=10.0, eta=1 / 6, max_time=400.0),
        _logit_golden("fig7_logit_stable_r0p1", r=0.1, eta=1 / 3, max_time=200.0),
        _logit_golden("fig7_logit_stable_r1p5", r=1.5, eta=1 / 3, max_time=200.0),
        _logit_golden("fig7_logit_stable_r10", r=10.0, eta=1 / 3, max_time=200.0),
        Scenario(
            name="fig9_replicator",
            kind=DynamicKind.REPLICATOR,
            # the guard stops the run while the spiral growth per loop is
            # still well above double-precision resolution of the crossings
            params=ModelParams(r=3.0, k=0.6, x_hat=0.2, s=0.17),
            initial=JointState(0.4, 0.7),
            integrator=IntegratorConfig(max_time=5000.0, y_max=12.0,
                                        sample_dt=0.02),
        ),
    ]
}

# Overlay figures: one SVG per reference figure, several runs each.
GOLDEN_FIGURES: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "fig4_best_response": (
        ("fig4_br_r0p1", "fig4_br_r3p5", "fig4_br_r7"),
        ("r=0.1", "r=3.5", "r=7"),
    ),
    "fig6_logit_trapping": (("fig6_logit_trap",), ("eta=0.25",)),
    "fig7_logit_unstable": (
        ("fig7_logit_unstable_r0p1", "fig7_logit_unstable_r1p5",
         "fig7_logit_unstable_r10"),
        ("r=0.1", "r=1.5", "r=10"),
    ),
    "fig7_logit_stable": (
        ("fig7_logit_stable_r0p1", "fig7_logit_stable_r1p5",
         "fig7_logit_stable_r10"),
        ("r=0.1", "r=1.5", "r=10"),
    ),
    "fig9_replicator": (("fig9_replicator",), ("replicator",)),
}


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _lyapunov_summary(p: ModelParams, traj: Trajectory) -> Optional[dict[str, float]]:
    try:
        values = lyapunov_along(p, traj)
    except DomainError:
        return None
    steps = values[1:] - values[:-1]
    return {
        "initial": float(values[0]),
        "final": float(values[-1]),
        "max_step_dip": float(max(0.0, -steps.min())) if len(steps) else 0.0,
        "nondecreasing_within_1e-8": bool(len(steps) == 0 or steps.min() >= -1e-8),
    }


def classify_outcome(stability: StabilityReport, orbit: Optional[OrbitReport],
                     termination: str) -> str:
    if termination == TERM_DIVERGENCE:
        return OUTCOME_DIVERGED
    if stability.classification == "sink":
        return OUTCOME_SINK
    if stability.classification == "center_threshold":
        return OUTCOME_CENTER
    if orbit is not None and orbit.converged:
        return OUTCOME_ORBIT
    return OUTCOME_REPELLING


def run_scenario(sc: Scenario, out_dir: Path | None = None,
                 figure_format: str = "svg") -> RunResult:
    """Integrate one scenario and write its requested artifacts."""
    traj = integrate(sc.kind, sc.params, sc.initial, sc.integrator)
    stability = classify_stability(sc.kind, sc.params)
    try:
        orbit = detect_orbit(traj, sc.params)
    except InsufficientCrossingsError:
        orbit = None
    lyap = (_lyapunov_summary(sc.params, traj)
            if sc.kind is DynamicKind.REPLICATOR else None)
    outcome = classify_outcome(stability, orbit, traj.termination)

    files: list[Path] = []
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if "csv" in sc.outputs:
            traj_path = out_dir / f"{sc.name}.csv"
            output.write_trajectory_csv(traj, traj_path)
            cross_path = out_dir / f"{sc.name}_crossings.csv"
            output.write_crossings_csv(traj, cross_path)
            files += [traj_path, cross_path]
        if "json" in sc.outputs:
            report_path = out_dir / f"{sc.name}_report.json"
            output.write_json_report(_report_payload(sc, traj, stability,
                                                     orbit, lyap, outcome),
                                     report_path)
            files.append(report_path)
        if "svg" in sc.outputs:
            fig_path = out_dir / f"{sc.name}.{figure_format}"
            write_phase_portrait([traj], sc.params, fig_path,
                                 PortraitStyle(title=sc.name))
            files.append(fig_path)
    return RunResult(scenario=sc, trajectory=traj, stability=stability,
                     orbit=orbit, lyapunov=lyap, outcome=outcome,
                     files=tuple(files))


def _report_payload(sc: Scenario, traj: Trajectory, stability: StabilityReport,
                    orbit: Optional[OrbitReport], lyap: Optional[dict],
                    outcome: str) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": sc.name,
        "dynamic": sc.kind.value,
        "params": {"r": sc.params.r, "k": sc.params.k, "s": sc.params.s,
                   "x_hat": sc.params.x_hat, "eta": sc.params.eta},
        "initial": {"x": sc.initial.x, "y": sc.initial.y},
        "termination": traj.termination,
        "outcome": outcome,
        "n_crossings": len(traj.crossings),
        "stability": output.stability_payload(stability),
        "orbit": output.orbit_payload(orbit),
        "lyapunov": lyap,
    }


def run_golden(out_dir: Path | None = None,
               figure_format: str = "svg") -> list[RunResult]:
    """Run every golden scenario and render the per-figure overlays."""
    results = {name: run_scenario(sc, out_dir)
               for name, sc in GOLDEN_SCENARIOS.items()}
    if out_dir is not None:
        out_dir = Path(out_dir)
        for fig_name, (members, labels) in GOLDEN_FIGURES.items():
            trajs = [results[m].trajectory for m in members]
            params = GOLDEN_SCENARIOS[members[0]].params
            write_phase_portrait(
                trajs, params, out_dir / f"{fig_name}.{figure_format}",
                PortraitStyle(title=fig_name, labels=labels))
    return list(results.values())


def run_sweep(spec: SweepSpec, out_dir: Path | None = None) -> list[SweepRow]:
    """Run the base scenario at each swept value and classify every run."""
    rows: list[SweepRow] = []
    for value in spec.values:
        params = spec.params_for(value)
        sc = dataclasses.replace(
            spec.base, name=f"{spec.base.name}_{spec.axis}_{value:g}",
            params=params, outputs=())
        result = run_scenario(sc)
        rows.append(SweepRow(
            axis=spec.axis,
            value=value,
            outcome=result.outcome,
            eta_star=result.stability.eta_star,
            measured_width=(result.orbit.measured_width
                            if result.orbit is not None else None),
            width_lower_bound=(result.orbit.orbit_width_lower_bound
                               if result.orbit is not None else None),
            crossings=len(result.trajectory.crossings),
            termination=result.trajectory.termination,
        ))
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_sweep_files(spec, rows, out_dir)
    return rows


def _write_sweep_files(spec: SweepSpec, rows: Sequence[SweepRow],
                       out_dir: Path) -> None:
    name = f"{spec.base.name}_sweep_{spec.axis}"
    lines = ["axis,value,outcome,eta_star,measured_width,"
             "width_lower_bound,crossings,termination"]
    for row in rows:
        cells = [row.axis, format(row.value, ".17g"), row.outcome,
                 "" if row.eta_star is None else format(row.eta_star, ".17g"),
                 "" if row.measured_width is None else format(row.measured_width, ".17g"),
                 "" if row.width_lower_bound is None
                 else format(row.width_lower_bound, ".17g"),
                 str(row.crossings), row.termination]
        lines.append(",".join(cells))
    (out_dir / f"{name}.csv").write_text("\n".join(lines) + "\n",
                                         encoding="utf-8")
    payload = {
        "schema_version": SCHEMA_VERSION,
        "base_scenario": spec.base.name,
        "axis": spec.axis,
        "rows": [dataclasses.asdict(row) for row in rows],
    }
    output.write_json_report(payload, out_dir / f"{name}.json")


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    scenarios: dict[str, Scenario]
    sweep: Optional[SweepSpec]


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise ConfigError(f"{context}: missing required key {key!r}")
    return mapping[key]


def _parse_scenario(name: str, node: Any) -> Scenario:
    context = f"scenario {name!r}"
    if not isinstance(node, dict):
        raise ConfigError(f"{context}: expected a mapping, got {type(node).__name__}")
    dynamic = _require(node, "dynamic", context)
    try:
        kind = DynamicKind(dynamic)
    except ValueError:
        raise ConfigError(
            f"{context}: unknown dynamic {dynamic!r}; expected one of "
            f"{[k.value for k in DynamicKind]}") from None
    params_node = dict(_require(node, "params", context))
    initial_node = dict(_require(node, "initial", context))
    try:
        params = ModelParams(**params_node)
        initial = JointState(**initial_node)
        integrator = IntegratorConfig(**dict(node.get("integrator", {})))
    except (DomainError, ConfigError) as exc:
        raise ConfigError(f"{context}: {exc}") from exc
    except TypeError as exc:
        raise ConfigError(f"{context}: {exc}") from exc
    outputs = tuple(node.get("outputs", _VALID_OUTPUTS))
    return Scenario(name=name, kind=kind, params=params, initial=initial,
                    integrator=integrator, outputs=outputs)


def load_config(path: Path) -> Config:
    """Parse a YAML experiment file into scenarios and an optional sweep.

    Parse errors keep pyyaml's line/column diagnostics; semantic errors name
    the offending scenario and key.
    """
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{path}: schema_version must be {SCHEMA_VERSION}, "
                          f"got {version!r}")
    scenarios_node = doc.get("scenarios", {})
    if not isinstance(scenarios_node, dict):
        raise ConfigError(f"{path}: 'scenarios' must be a mapping")
    scenarios = {name: _parse_scenario(name, node)
                 for name, node in scenarios_node.items()}

    sweep = None
    if "sweep" in doc:
        node = doc["sweep"]
        base_name = _require(node, "base", "sweep")
        if base_name not in scenarios:
            raise ConfigError(f"sweep: base scenario {base_name!r} not defined")
        values = tuple(float(v) for v in _require(node, "values", "sweep"))
        if any(not math.isfinite(v) for v in values):
            raise ConfigError("sweep: values must be finite")
        sweep = SweepSpec(base=scenarios[base_name],
                          axis=str(_require(node, "axis", "sweep")),
                          values=values)
    return Config(scenarios=scenarios, sweep=sweep)

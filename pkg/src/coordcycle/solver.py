"""Trajectory integration with exact diagonal-crossing localization.

Three paths share one Trajectory representation:

* a closed-form stepper for the best-response dynamic that stitches
  exponential arcs between diagonal crossings (the default BR path),
* an adaptive Runge-Kutta path (scipy RK45 with dense output) for the smooth
  dynamics and for cross-validating the BR stepper,
* a fixed-step RK4 reference (see ``reference``) kept independent of both.

The best-response field is set-valued on the diagonal; the selection policy
lives here, not in the field layer.  Policies are deterministic per run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .fields import DynamicKind, br_geometry, logistic
from .game import DomainError, GamePayoffMatrix, JointState, ModelParams


class ConfigError(ValueError):
    """An IntegratorConfig field is out of range."""


class BracketError(ValueError):
    """Event localization was asked to search a bracket with no sign change."""


class IntegrationError(RuntimeError):
    """Internal consistency guard tripped (bad bracket, infeasible escape, ...)."""


# Trajectory termination outcomes.  Divergence is a classified outcome, not a
# failure: the replicator dynamic provably spirals without bound.
TERM_MAX_TIME = "max_time"
TERM_MAX_CROSSINGS = "max_crossings"
TERM_DIVERGENCE = "divergence"

SLIDE_ESCAPE_IMMEDIATELY = "escape_immediately"
SLIDE_TO_BOUNDARY = "slide_to_boundary"


class CrossingDirection(Enum):
    """Region the trajectory enters when it leaves the diagonal."""

    INTO_S_PLUS = "into_S_plus"    # x > y afterwards
    INTO_S_MINUS = "into_S_minus"  # x < y afterwards


@dataclass(frozen=True)
class CrossingEvent:
    t: float
    x: float
    direction: CrossingDirection


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    event_tol: float = 1e-10
    max_time: float = 200.0
    max_crossings: int = 1000
    diag_band: float = 1e-9
    sliding_policy: str = SLIDE_ESCAPE_IMMEDIATELY
    y_max: float = 50.0
    sample_dt: float = 0.05

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol", "diag_band", "sample_dt"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if not self.max_time > 0.0:
            raise ConfigError(f"max_time must be > 0, got {self.max_time!r}")
        if self.max_crossings < 1:
            raise ConfigError(f"max_crossings must be >= 1, got {self.max_crossings!r}")
        if self.y_max <= 0.0:
            raise ConfigError(f"y_max must be > 0, got {self.y_max!r}")
        if self.sliding_policy not in (SLIDE_ESCAPE_IMMEDIATELY, SLIDE_TO_BOUNDARY):
            raise ConfigError(f"unknown sliding policy {self.sliding_policy!r}")


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped samples of a run plus its ordered diagonal crossings.

    ``payoff_paths`` holds the (n, 4) matrix entries (a, b, c, d) when the
    run integrated the full payoff matrix; None in reduced mode.
    ``boundary_excursion`` records how far x strayed outside [0, 1] before
    clamping (integration-accuracy diagnostic).
    """

    kind: DynamicKind
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    crossings: tuple[CrossingEvent, ...]
    termination: str
    payoff_paths: Optional[np.ndarray] = None
    boundary_excursion: float = 0.0

    def __post_init__(self):
        if len(self.t) == 0:
            raise IntegrationError("trajectory must contain at least one sample")
        if np.any(np.diff(self.t) <= 0.0):
            raise IntegrationError("sample times must be strictly increasing")
        times = [c.t for c in self.crossings]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise IntegrationError("crossing times must be strictly increasing")
        for arr in (self.t, self.x, self.y, self.payoff_paths):
            if arr is not None:
                arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.t)

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])

    @property
    def final_state(self) -> JointState:
        return JointState(float(self.x[-1]), float(self.y[-1]))

    def crossing_x(self, direction: CrossingDirection | None = None) -> list[float]:
        """Crossing population shares, optionally filtered by escape direction."""
        return [c.x for c in self.crossings
                if direction is None or c.direction is direction]


# ---------------------------------------------------------------------------
# Event localization
# ---------------------------------------------------------------------------

_SCAN_POINTS = 64


def locate_event(f: Callable[[float], float],
                 bracket: tuple[float, float],
                 tol: float) -> float:
    """Locate a root of a scalar function of time inside a bracket.

    Stops when |f(t)| <= tol or the bracket width drops below tol.  Uses a
    false-position proposal with a bisection fallback whenever the proposal
    leaves (or barely shrinks) the bracket, so the bracket width decreases
    geometrically regardless of f's shape.

    A bracket whose endpoint signs agree is rescued by a coarse scan: a
    tangential root sitting on a scan point (e.g. f(t) = t**2 on (-1, 1)) is
    still found; otherwise BracketError is raised.
    """
    t_lo, t_hi = bracket
    if t_hi < t_lo:
        t_lo, t_hi = t_hi, t_lo
    f_lo, f_hi = f(t_lo), f(t_hi)
    if f_lo == 0.0:
        return t_lo
    if f_hi == 0.0:
        return t_hi
    if f_lo * f_hi > 0.0:
        grid = np.linspace(t_lo, t_hi, _SCAN_POINTS + 1)
        values = [f(t) for t in grid]
        for i in range(len(grid) - 1):
            if values[i] == 0.0:
                return float(grid[i])
            if values[i] * values[i + 1] < 0.0:
                t_lo, t_hi, f_lo, f_hi = grid[i], grid[i + 1], values[i], values[i + 1]
                break
        else:
            best = int(np.argmin(np.abs(values)))
            if abs(values[best]) <= tol:
                return float(grid[best])
            raise BracketError(
                f"no sign change on [{bracket[0]}, {bracket[1]}]: "
                f"f(lo)={f_lo!r}, f(hi)={f_hi!r}"
            )

    for iteration in range(256):
        width = t_hi - t_lo
        if width <= tol:
            break
        denom = f_hi - f_lo
        t_mid = t_hi - f_hi * width / denom if denom != 0.0 else 0.5 * (t_lo + t_hi)
        # force a bisection often enough to guarantee geometric shrinkage
        if iteration % 3 == 2 or not (t_lo < t_mid < t_hi):
            t_mid = 0.5 * (t_lo + t_hi)
        if t_mid == t_lo or t_mid == t_hi:
            break
        f_mid = f(t_mid)
        if f_mid == 0.0 or abs(f_mid) <= tol:
            return t_mid
        if f_lo * f_mid < 0.0:
            t_hi, f_hi = t_mid, f_mid
        else:
            t_lo, f_lo = t_mid, f_mid
    return 0.5 * (t_lo + t_hi)


# ---------------------------------------------------------------------------
# Best-response closed-form machinery
# ---------------------------------------------------------------------------


def br_crossing_coefficients(p: ModelParams, x0: float, y0: float,
                             branch: int) -> tuple[float, float]:
    """Coefficients (A, B) of the crossing equation A - B*t = exp(-t).

    ``branch`` selects the active field: +1 for the region x > y (x grows
    toward 1), -1 for x < y (x decays toward 0).  Undefined on the boundary
    rides (x0 = 1 with branch +1, x0 = 0 with branch -1), where the crossing
    time is linear instead.
    """
    rs = p.r / p.s
    if branch > 0:
        denom = (1.0 - x0) * (1.0 + rs)
        if denom == 0.0:
            raise DomainError("crossing equation degenerates on the x=1 face")
        return (1.0 - y0 + rs * (1.0 - x0)) / denom, rs * (1.0 - p.k) / denom
    denom = x0 * (1.0 + rs)
    if denom == 0.0:
        raise DomainError("crossing equation degenerates on the x=0 face")
    return (y0 + rs * x0) / denom, rs * p.k / denom


def _branch_state(branch: int, x0: float, y0: float, rs: float, k: float,
                  tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (x, y) of one off-diagonal arc at offsets tau from its start."""
    decay = np.exp(-tau)
    if branch > 0:
        x = 1.0 - (1.0 - x0) * decay
        y = rs * (1.0 - k) * tau + rs * (1.0 - x0) * (decay - 1.0) + y0
    else:
        x = x0 * decay
        y = -rs * k * tau + rs * x0 * (1.0 - decay) + y0
    return x, y


def _solve_branch_crossing(p: ModelParams, x0: float, y0: float,
                           branch: int) -> tuple[float, float]:
    """Time to the next diagonal crossing of one arc, and the landing share.

    Boundary faces are ridden at constant x (the field is zero there) while y
    drifts linearly to the corner.  Everywhere else the crossing solves
    A - B*t = exp(-t); starts exactly on the diagonal carry the trivial root
    t = 0, so the search bracket begins at the peak -ln(B) of the residual.
    The root is polished with Newton steps until the equation residual is at
    rounding level.
    """
    rs = p.r / p.s
    if branch > 0 and x0 == 1.0:
        return (1.0 - y0) / (rs * (1.0 - p.k)), 1.0
    if branch < 0 and x0 == 0.0:
        return y0 / (rs * p.k), 0.0

    A, B = br_crossing_coefficients(p, x0, y0, branch)
    if x0 == y0:
        if B >= 1.0:
            raise IntegrationError(
                f"diagonal escape infeasible at x={x0} (B={B}); "
                "escape direction violates the sliding-set geometry"
            )
        lo = -math.log(B)
    else:
        lo = 0.0
    hi = A / B

    def residual(t: float) -> float:
        return A - B * t - math.exp(-t)

    if residual(lo) < 0.0 or residual(hi) > 0.0:
        raise IntegrationError(
            f"crossing-equation bracket failed: A={A}, B={B}, "
            f"f({lo})={residual(lo)}, f({hi})={residual(hi)}"
        )
    t_star = locate_event(residual, (lo, hi), tol=1e-13)
    for _ in range(4):
        slope = -B + math.exp(-t_star)
        if slope == 0.0:
            break
        step = residual(t_star) / slope
        t_star -= step
        if abs(step) <= 1e-16 * max(1.0, t_star):
            break
    x_star = (1.0 - (1.0 - x0) * math.exp(-t_star) if branch > 0
              else x0 * math.exp(-t_star))
    return t_star, x_star


def br_crossing_time(p: ModelParams, init: JointState) -> tuple[float, float]:
    """First diagonal-crossing time and landing share from an off-diagonal start."""
    if p.r <= 0.0:
        raise DomainError("a diagonal crossing needs r > 0")
    if init.x == init.y:
        raise DomainError("initial condition lies on the diagonal")
    branch = 1 if init.x > init.y else -1
    return _solve_branch_crossing(p, init.x, init.y, branch)


def _segment_offsets(duration: float, sample_dt: float) -> np.ndarray:
    n = max(1, int(math.ceil(duration / sample_dt - 1e-12)))
    return np.linspace(0.0, duration, n + 1)


class _SampleAccumulator:
    """Collects per-segment sample arrays, dropping duplicated joints."""

    def __init__(self):
        self._t: list[np.ndarray] = []
        self._x: list[np.ndarray] = []
        self._y: list[np.ndarray] = []

    def extend(self, t: np.ndarray, x: np.ndarray, y: np.ndarray):
        if self._t and len(t) > 0 and t[0] <= self._t[-1][-1]:
            t, x, y = t[1:], x[1:], y[1:]
        if len(t) > 0:
            self._t.append(np.asarray(t, dtype=float))
            self._x.append(np.asarray(x, dtype=float))
            self._y.append(np.asarray(y, dtype=float))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.concatenate(self._t), np.concatenate(self._x),
                np.concatenate(self._y))


def _initial_branch(p: ModelParams, x0: float, y0: float,
                    sliding_policy: str, diag_band: float):
    """Resolve the escape direction for a start at or near the diagonal.

    Returns (branch, slide_target) where slide_target is the diagonal share
    to slide to first (None for immediate escape) -- or (None, None) for a
    start held at rest at (k, k).

    Escapes from [0, alpha] and [beta, 1] are forced by the geometry.  In
    between, both directions admit solutions; the immediate-escape policy
    picks the direction the sliding motion would eventually take (downhill
    from k toward alpha escapes below the diagonal's x<k side into x > y,
    uphill toward beta escapes into x < y), which makes it the zero-dwell
    limit of the sliding policy.
    """
    if abs(x0 - y0) > diag_band:
        return (1 if x0 > y0 else -1), None
    if x0 == p.k:
        return None, None
    geo = br_geometry(p)
    if x0 <= geo.alpha:
        return 1, None
    if x0 >= geo.beta:
        return -1, None
    if sliding_policy == SLIDE_TO_BOUNDARY:
        return (1, geo.alpha) if x0 < p.k else (-1, geo.beta)
    return (1 if x0 < p.k else -1), None


def _constant_trajectory(kind: DynamicKind, x0: float, y0: float,
                         max_time: float, sample_dt: float,
                         termination: str = TERM_MAX_TIME) -> Trajectory:
    tau = _segment_offsets(max_time, sample_dt)
    return Trajectory(kind=kind, t=tau, x=np.full_like(tau, x0),
                      y=np.full_like(tau, y0), crossings=(),
                      termination=termination)


def _br_analytic(p: ModelParams, init: JointState, *, max_time: float,
                 max_crossings: int, sample_dt: float, sliding_policy: str,
                 diag_band: float) -> Trajectory:
    kind = DynamicKind.BEST_RESPONSE
    rs = p.r / p.s if p.s > 0 else 0.0
    x0, y0 = init.x, init.y

    if p.r == 0.0:
        # frozen payoffs: a single exponential arc, or rest on the diagonal
        if x0 == y0:
            return _constant_trajectory(kind, x0, y0, max_time, sample_dt)
        branch = 1 if x0 > y0 else -1
        tau = _segment_offsets(max_time, sample_dt)
        xs, ys = _branch_state(branch, x0, y0, 0.0, p.k, tau)
        return Trajectory(kind=kind, t=tau, x=xs, y=ys, crossings=(),
                          termination=TERM_MAX_TIME)

    branch, slide_target = _initial_branch(p, x0, y0, sliding_policy, diag_band)
    if branch is None:
        return _constant_trajectory(kind, x0, y0, max_time, sample_dt)

    acc = _SampleAccumulator()
    crossings: list[CrossingEvent] = []
    t_now = 0.0
    termination = TERM_MAX_TIME

    if slide_target is not None:
        # slide along the diagonal to (alpha, alpha) or (beta, beta):
        # x = y obeys xdot = (r/s)(x - k), solved in closed form
        slide_dur = (p.s / p.r) * math.log((p.k - slide_target) / (p.k - x0))
        dur = min(slide_dur, max_time)
        tau = _segment_offsets(dur, sample_dt)
        pos = p.k + (x0 - p.k) * np.exp(rs * tau)
        acc.extend(tau, pos, pos.copy())
        t_now = dur
        if slide_dur >= max_time:
            t, x, y = acc.arrays()
            return Trajectory(kind=kind, t=t, x=x, y=y, crossings=(),
                              termination=TERM_MAX_TIME)
        x0 = y0 = slide_target

    geo = br_geometry(p)
    while True:
        dt, x_star = _solve_branch_crossing(p, x0, y0, branch)
        if t_now + dt >= max_time:
            tau = _segment_offsets(max_time - t_now, sample_dt)
            xs, ys = _branch_state(branch, x0, y0, rs, p.k, tau)
            acc.extend(t_now + tau, xs, ys)
            break
        tau = _segment_offsets(dt, sample_dt)
        xs, ys = _branch_state(branch, x0, y0, rs, p.k, tau)
        acc.extend(t_now + tau, xs, ys)
        t_now += dt
        direction = (CrossingDirection.INTO_S_MINUS if branch > 0
                     else CrossingDirection.INTO_S_PLUS)
        crossings.append(CrossingEvent(t=t_now, x=x_star, direction=direction))
        if len(crossings) >= max_crossings:
            termination = TERM_MAX_CROSSINGS
            break
        if x_star <= geo.alpha:
            branch = 1
        elif x_star >= geo.beta:
            branch = -1
        else:
            raise IntegrationError(
                f"crossing landed inside the sliding set: x={x_star} "
                f"in ({geo.alpha}, {geo.beta})"
            )
        x0 = y0 = x_star

    t, x, y = acc.arrays()
    excursion = float(max(0.0, -x.min(), x.max() - 1.0))
    return Trajectory(kind=kind, t=t, x=np.clip(x, 0.0, 1.0), y=y,
                      crossings=tuple(crossings), termination=termination,
                      boundary_excursion=excursion)


def br_integrate_analytic(p: ModelParams, init: JointState, n_crossings: int,
                          cfg: IntegratorConfig | None = None) -> Trajectory:
    """Stitch closed-form arcs through the first n_crossings diagonal crossings."""
    if p.r <= 0.0:
        raise DomainError("the closed-form crossing stitcher needs r > 0")
    if n_crossings < 1:
        raise DomainError("n_crossings must be >= 1")
    cfg = cfg or IntegratorConfig()
    return _br_analytic(p, init, max_time=math.inf, max_crossings=n_crossings,
                        sample_dt=cfg.sample_dt, sliding_policy=cfg.sliding_policy,
                        diag_band=cfg.diag_band)


# ---------------------------------------------------------------------------
# Adaptive numeric path (scipy RK45, dense output)
# ---------------------------------------------------------------------------


class _StateLayout:
    """Maps between solver state vectors and the (x, y) coordinates.

    Reduced mode integrates (x, y) directly; full-matrix mode integrates
    (x, a, b, c, d) and derives y = (d - b)/s from the live payoffs, which
    exercises the payoff-adjustment law instead of its reduction.
    """

    def __init__(self, p: ModelParams, matrix0: GamePayoffMatrix | None):
        self.p = p
        self.full = matrix0 is not None
        self.matrix0 = matrix0

    def initial(self, init: JointState) -> np.ndarray:
        if self.full:
            m = self.matrix0
            return np.array([init.x, m.a, m.b, m.c, m.d], dtype=float)
        return np.array([init.x, init.y], dtype=float)

    def x_of(self, u: np.ndarray) -> float:
        return u[0]

    def y_of(self, u: np.ndarray):
        if self.full:
            s_live = u[1] - u[2] - u[3] + u[4]
            return (u[4] - u[2]) / s_live
        return u[1]

    def rhs(self, kind: DynamicKind, branch: int | None = None):
        p = self.p
        r, s, k = p.r, p.s, p.k
        rs = r / s
        eta = p.require_eta() if kind is DynamicKind.LOGIT else None

        def xdot(x: float, y: float, s_live: float) -> float:
            if kind is DynamicKind.BEST_RESPONSE:
                return 1.0 - x if branch > 0 else -x
            if kind is DynamicKind.LOGIT:
                return logistic(s_live * (x - y) / eta) - x
            xc = min(max(x, 0.0), 1.0)
            return s_live * xc * (1.0 - xc) * (x - y)

        if not self.full:
            def f(t, u):
                return (xdot(u[0], u[1], s), rs * (u[0] - k))
            return f

        x_hat = p.x_hat

        def f_full(t, u):
            x = u[0]
            s_live = u[1] - u[2] - u[3] + u[4]
            y = (u[4] - u[2]) / s_live
            left = r * (x_hat - (1.0 - k) * x)
            right = r * (x_hat - k * (1.0 - x))
            return (xdot(x, y, s_live), left, left, right, right)

        return f_full


def _guard_events(layout: _StateLayout, y_max: float):
    def guard_hi(t, u):
        return layout.y_of(u) - y_max

    def guard_lo(t, u):
        return layout.y_of(u) + y_max

    guard_hi.terminal = True
    guard_lo.terminal = True
    return [guard_hi, guard_lo]


def _sample_grid(t_end: float, sample_dt: float) -> np.ndarray:
    if t_end <= 0.0:
        return np.array([0.0])
    n = max(1, int(round(t_end / sample_dt)))
    return np.linspace(0.0, t_end, n + 1)


def _finalize_numeric(kind: DynamicKind, layout: _StateLayout,
                      pieces: Sequence, t_end: float,
                      crossings: list[CrossingEvent], termination: str,
                      cfg: IntegratorConfig) -> Trajectory:
    """Sample the dense solution on a uniform grid and package a Trajectory."""
    if len(crossings) > cfg.max_crossings:
        t_end = crossings[cfg.max_crossings - 1].t
        crossings = crossings[:cfg.max_crossings]
        termination = TERM_MAX_CROSSINGS

    def dense_eval(tq: float) -> np.ndarray:
        for t_lo, t_hi, interp in pieces:
            if t_lo <= tq <= t_hi:
                return interp(tq)
        # fall back to the nearest piece edge (rounding at segment joints)
        t_lo, t_hi, interp = pieces[-1]
        return interp(min(max(tq, t_lo), t_hi))

    grid = _sample_grid(t_end, cfg.sample_dt)
    states = np.array([dense_eval(tq) for tq in grid])
    x = states[:, 0]
    if layout.full:
        y = (states[:, 4] - states[:, 2]) / (
            states[:, 1] - states[:, 2] - states[:, 3] + states[:, 4])
        payoff_paths = states[:, 1:5]
    else:
        y = states[:, 1]
        payoff_paths = None
    excursion = float(max(0.0, -x.min(), x.max() - 1.0))
    return Trajectory(kind=kind, t=grid, x=np.clip(x, 0.0, 1.0), y=y,
                      crossings=tuple(crossings), termination=termination,
                      payoff_paths=payoff_paths, boundary_excursion=excursion)


def _numeric_smooth(kind: DynamicKind, p: ModelParams, init: JointState,
                    cfg: IntegratorConfig,
                    matrix0: GamePayoffMatrix | None) -> Trajectory:
    layout = _StateLayout(p, matrix0)
    sol = solve_ivp(layout.rhs(kind), (0.0, cfg.max_time), layout.initial(init),
                    method="RK45", rtol=cfg.rel_tol, atol=cfg.abs_tol,
                    dense_output=True, events=_guard_events(layout, cfg.y_max))
    if sol.status == -1:
        raise IntegrationError(f"adaptive integration failed: {sol.message}")
    termination = TERM_DIVERGENCE if sol.status == 1 else TERM_MAX_TIME
    t_end = float(sol.t[-1])

    def gap(tq: float) -> float:
        u = sol.sol(tq)
        return layout.x_of(u) - layout.y_of(u)

    crossings: list[CrossingEvent] = []
    g_nodes = [layout.x_of(sol.y[:, i]) - layout.y_of(sol.y[:, i])
               for i in range(sol.y.shape[1])]
    for i in range(len(g_nodes) - 1):
        if g_nodes[i] * g_nodes[i + 1] < 0.0:
            tc = locate_event(gap, (float(sol.t[i]), float(sol.t[i + 1])),
                              tol=min(cfg.event_tol, 1e-12))
            direction = (CrossingDirection.INTO_S_MINUS if g_nodes[i] > 0.0
                         else CrossingDirection.INTO_S_PLUS)
            crossings.append(CrossingEvent(
                t=tc, x=float(layout.x_of(sol.sol(tc))), direction=direction))

    pieces = [(0.0, t_end, sol.sol)]
    return _finalize_numeric(kind, layout, pieces, t_end, crossings,
                             termination, cfg)


def _numeric_br(p: ModelParams, init: JointState, cfg: IntegratorConfig,
                matrix0: GamePayoffMatrix | None) -> Trajectory:
    """Segment-wise RK45 for the discontinuous best-response field.

    Each smooth arc runs with a terminal diagonal-crossing event matched to
    the active branch; at a crossing the branch switches per the landing-set
    geometry and the restart is nudged onto the entered side by at most a few
    ulps so the next event cannot re-fire at the joint.
    """
    kind = DynamicKind.BEST_RESPONSE
    layout = _StateLayout(p, matrix0)
    u = layout.initial(init)
    x0, y0 = init.x, float(layout.y_of(u))

    branch: int | None
    if p.r == 0.0:
        branch = (1 if x0 > y0 else -1) if x0 != y0 else None
        slide_target = None
    else:
        branch, slide_target = _initial_branch(p, x0, y0, cfg.sliding_policy,
                                               cfg.diag_band)
    if branch is None:
        return _constant_trajectory(kind, x0, y0, cfg.max_time, cfg.sample_dt)
    if slide_target is not None and matrix0 is not None:
        raise DomainError("sliding starts are not supported in full-matrix mode")

    pieces = []
    crossings: list[CrossingEvent] = []
    t_now = 0.0
    termination = TERM_MAX_TIME

    if slide_target is not None:
        rs = p.r / p.s
        slide_dur = (p.s / p.r) * math.log((p.k - slide_target) / (p.k - x0))
        dur = min(slide_dur, cfg.max_time)

        def slide_interp(tq, x_start=x0):
            pos = p.k + (x_start - p.k) * math.exp(rs * tq)
            return np.array([pos, pos])

        pieces.append((0.0, dur, slide_interp))
        t_now = dur
        if slide_dur >= cfg.max_time:
            return _finalize_numeric(kind, layout, pieces, cfg.max_time,
                                     crossings, TERM_MAX_TIME, cfg)
        u = np.array([slide_target, slide_target])

    geo = br_geometry(p) if p.r > 0.0 else None
    guards = _guard_events(layout, cfg.y_max)

    def nudge(u_new: np.ndarray, new_branch: int) -> np.ndarray:
        """Place the restart strictly on the side the trajectory enters."""
        u_new = u_new.copy()
        x_c = layout.x_of(u_new)
        if layout.full:
            return u_new  # payoff entries stay; the y offset is within rounding
        if new_branch > 0:
            u_new[1] = min(u_new[1], math.nextafter(x_c, -math.inf))
        else:
            u_new[1] = max(u_new[1], math.nextafter(x_c, math.inf))
        return u_new

    u = nudge(u, branch) if abs(layout.x_of(u) - layout.y_of(u)) <= cfg.diag_band else u

    while t_now < cfg.max_time:
        def crossing_event(t, uu):
            return layout.x_of(uu) - layout.y_of(uu)

        crossing_event.terminal = True
        crossing_event.direction = -branch
        sol = solve_ivp(layout.rhs(kind, branch=branch), (t_now, cfg.max_time),
                        u, method="RK45", rtol=cfg.rel_tol, atol=cfg.abs_tol,
                        dense_output=True, events=[crossing_event, *guards])
        if sol.status == -1:
            raise IntegrationError(f"adaptive integration failed: {sol.message}")
        pieces.append((t_now, float(sol.t[-1]), sol.sol))
        t_now = float(sol.t[-1])
        if sol.status == 0:
            break
        if len(sol.t_events[1]) or len(sol.t_events[2]):
            termination = TERM_DIVERGENCE
            break
        tc = float(sol.t_events[0][0])
        u_c = sol.y_events[0][0]
        x_c = float(layout.x_of(u_c))
        direction = (CrossingDirection.INTO_S_MINUS if branch > 0
                     else CrossingDirection.INTO_S_PLUS)
        crossings.append(CrossingEvent(t=tc, x=x_c, direction=direction))
        if len(crossings) >= cfg.max_crossings:
            termination = TERM_MAX_CROSSINGS
            break
        if x_c <= geo.alpha:
            branch = 1
        elif x_c >= geo.beta:
            branch = -1
        else:
            raise IntegrationError(
                f"crossing landed inside the sliding set: x={x_c}")
        u = nudge(u_c, branch)

    return _finalize_numeric(kind, layout, pieces, t_now, crossings,
                             termination, cfg)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def integrate(kind: DynamicKind, p: ModelParams, init: JointState,
              cfg: IntegratorConfig | None = None, *,
              method: str = "auto") -> Trajectory:
    """Advance the joint dynamics from ``init`` under the chosen dynamic.

    ``method="auto"`` picks the closed-form stitcher for the best-response
    dynamic and adaptive RK45 for the smooth ones; ``method="rk45"`` forces
    the numeric path everywhere (used to cross-validate the stitcher).
    """
    cfg = cfg or IntegratorConfig()
    if method not in ("auto", "analytic", "rk45"):
        raise ConfigError(f"unknown integration method {method!r}")
    if kind is DynamicKind.BEST_RESPONSE:
        if method == "rk45":
            return _numeric_br(p, init, cfg, None)
        return _br_analytic(p, init, max_time=cfg.max_time,
                            max_crossings=cfg.max_crossings,
                            sample_dt=cfg.sample_dt,
                            sliding_policy=cfg.sliding_policy,
                            diag_band=cfg.diag_band)
    if method == "analytic":
        raise ConfigError("closed-form stepping exists only for best response")
    if kind is DynamicKind.LOGIT:
        p.require_eta()
    return _numeric_smooth(kind, p, init, cfg, None)


def integrate_full_matrix(kind: DynamicKind, m0: GamePayoffMatrix,
                          p: ModelParams, x0: float,
                          cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate the full payoff matrix under the adjustment law.

    Validates the reduction: p.s must equal the matrix alignment, and the
    initial indifference state comes from the matrix.  The resulting
    trajectory carries the payoff paths alongside the derived (x, y).
    """
    cfg = cfg or IntegratorConfig()
    s0 = m0.alignment
    if s0 <= 0.0:
        raise DomainError(f"initial matrix must have positive alignment, got {s0}")
    if abs(s0 - p.s) > 1e-12 * max(1.0, abs(p.s)):
        raise DomainError(
            f"params alignment s={p.s} disagrees with the matrix alignment {s0}")
    init = JointState(x0, m0.indifference_state())
    if kind is DynamicKind.BEST_RESPONSE:
        return _numeric_br(p, init, cfg, m0)
    if kind is DynamicKind.LOGIT:
        p.require_eta()
    return _numeric_smooth(kind, p, init, cfg, m0)

"""Steady states, linearized stability, orbit convergence, and the Lyapunov
diagnostic for the replicator dynamic.

Eigenvalues of the 2x2 Jacobians come from the closed-form quadratic on the
trace and determinant rather than a general eigensolver: the noise threshold
separating a repelling steady state from a sink is then detected exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fields import DynamicKind, replicator_xdot
from .game import DomainError, JointState, ModelParams, y_dot
from .solver import CrossingDirection, Trajectory


class UnsupportedDynamicError(ValueError):
    """The requested computation is not defined for this dynamic."""


class InsufficientCrossingsError(ValueError):
    """The trajectory has too few diagonal crossings for orbit detection."""


CLASS_REPELLING = "repelling"
CLASS_SINK = "sink"
CLASS_CENTER_THRESHOLD = "center_threshold"

# |Re lambda| below this is reported as the threshold case rather than a
# sign call the linearization cannot support.
_CENTER_WINDOW = 1e-12


@dataclass(frozen=True)
class StabilityReport:
    """Steady state with its linearization verdict.

    The best-response field is not differentiable at its steady state, so BR
    reports carry no Jacobian or eigenvalues; the repelling classification is
    theorem-backed instead of computed.
    """

    kind: DynamicKind
    steady_state: JointState
    jacobian: Optional[np.ndarray]
    eigenvalues: Optional[tuple[complex, complex]]
    classification: str
    eta_star: Optional[float] = None

    def __post_init__(self):
        if self.jacobian is not None:
            self.jacobian.setflags(write=False)


@dataclass(frozen=True)
class OrbitReport:
    """Verdict on convergence of the diagonal-crossing sequence.

    ``upper_tail``/``lower_tail`` are the last K crossing shares on each side
    of the steady state; ``residual`` is the final same-side gap at
    termination; ``orbit_width_lower_bound`` is s/(s+r) for best-response
    runs (None otherwise).
    """

    converged: bool
    upper_tail: tuple[float, ...]
    lower_tail: tuple[float, ...]
    residual: float
    orbit_width_lower_bound: Optional[float]

    @property
    def upper_limit(self) -> float:
        return self.upper_tail[-1]

    @property
    def lower_limit(self) -> float:
        return self.lower_tail[-1]

    @property
    def measured_width(self) -> float:
        return self.upper_limit - self.lower_limit


@dataclass(frozen=True)
class LyapunovEvaluation:
    value: float
    time_derivative: float


def eta_star(p: ModelParams) -> float:
    """Noise threshold s*k*(1-k): repelling below it, a sink above it."""
    return p.s * p.k * (1.0 - p.k)


def steady_state(kind: DynamicKind, p: ModelParams) -> JointState:
    """The unique rest point of the joint dynamics.

    The indifference state can only rest at x = k; the logit choice rule then
    pins y at k - (eta/s) ln(k/(1-k)), while best response and replicator
    rest exactly on the diagonal.
    """
    if kind is DynamicKind.LOGIT:
        eta = p.require_eta()
        return JointState(p.k, p.k - (eta / p.s) * math.log(p.k / (1.0 - p.k)))
    return JointState(p.k, p.k)


def jacobian_at_steady_state(kind: DynamicKind, p: ModelParams) -> np.ndarray:
    if kind is DynamicKind.BEST_RESPONSE:
        raise UnsupportedDynamicError(
            "the best-response field is not differentiable at its steady state")
    kk = p.k * (1.0 - p.k)
    if kind is DynamicKind.LOGIT:
        gain = (p.s / p.require_eta()) * kk
        return np.array([[gain - 1.0, -gain], [p.r / p.s, 0.0]])
    gain = p.s * kk
    return np.array([[gain, -gain], [p.r / p.s, 0.0]])


def eigenvalues_2x2(jac: np.ndarray) -> tuple[complex, complex]:
    """Roots of the characteristic polynomial via the quadratic formula."""
    trace = float(jac[0, 0] + jac[1, 1])
    det = float(jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0])
    disc = cmath.sqrt(complex(trace * trace - 4.0 * det))
    return (complex(0.5 * (trace + disc)), complex(0.5 * (trace - disc)))


def classify_stability(kind: DynamicKind, p: ModelParams) -> StabilityReport:
    """Classify the steady state by the largest real part of the eigenvalues.

    Best response: repelling by theorem (every post-transient crossing lands
    outside the sliding set, so no neighborhood of (k, k) is invariant); no
    eigenvalues are reported.
    """
    state = steady_state(kind, p)
    if kind is DynamicKind.BEST_RESPONSE:
        return StabilityReport(kind=kind, steady_state=state, jacobian=None,
                               eigenvalues=None, classification=CLASS_REPELLING)
    jac = jacobian_at_steady_state(kind, p)
    eig = eigenvalues_2x2(jac)
    max_real = max(eig[0].real, eig[1].real)
    if abs(max_real) < _CENTER_WINDOW:
        label = CLASS_CENTER_THRESHOLD
    elif max_real > 0.0:
        label = CLASS_REPELLING
    else:
        label = CLASS_SINK
    threshold = eta_star(p) if kind is DynamicKind.LOGIT else None
    return StabilityReport(kind=kind, steady_state=state, jacobian=jac,
                           eigenvalues=eig, classification=label,
                           eta_star=threshold)


def _monotone(values: list[float], slack: float = 1e-12) -> bool:
    up = all(b >= a - slack for a, b in zip(values, values[1:]))
    down = all(b <= a + slack for a, b in zip(values, values[1:]))
    return up or down


def detect_orbit(traj: Trajectory, p: ModelParams, tol: float = 1e-6,
                 K: int = 5) -> OrbitReport:
    """Decide whether the crossing sequence has settled onto a closed orbit.

    The diagonal acts as the section: same-side crossing shares form two
    monotone subsequences, and the orbit is declared converged when the last
    K values on each side are monotone with successive gaps below tol.
    """
    if K < 2:
        raise DomainError(f"tail length K must be >= 2, got {K!r}")
    uppers = traj.crossing_x(CrossingDirection.INTO_S_MINUS)
    lowers = traj.crossing_x(CrossingDirection.INTO_S_PLUS)
    if len(uppers) < K or len(lowers) < K:
        raise InsufficientCrossingsError(
            f"need at least {K} crossings per side, have "
            f"{len(uppers)} upper / {len(lowers)} lower")
    upper_tail = uppers[-K:]
    lower_tail = lowers[-K:]
    gaps = [abs(b - a) for a, b in zip(upper_tail, upper_tail[1:])]
    gaps += [abs(b - a) for a, b in zip(lower_tail, lower_tail[1:])]
    converged = (max(gaps) < tol and _monotone(upper_tail)
                 and _monotone(lower_tail))
    residual = max(abs(upper_tail[-1] - upper_tail[-2]),
                   abs(lower_tail[-1] - lower_tail[-2]))
    width_bound = None
    if traj.kind is DynamicKind.BEST_RESPONSE and p.r > 0.0:
        width_bound = p.s / (p.s + p.r)
    return OrbitReport(converged=converged, upper_tail=tuple(upper_tail),
                       lower_tail=tuple(lower_tail), residual=residual,
                       orbit_width_lower_bound=width_bound)


def lyapunov_offset(p: ModelParams) -> float:
    """Constant that zeroes the Lyapunov function at the steady state."""
    return (p.k / p.s) * math.log(p.k) + ((1.0 - p.k) / p.s) * math.log(1.0 - p.k)


def lyapunov(p: ModelParams, state: JointState) -> LyapunovEvaluation:
    """Lyapunov diagnostic for the replicator dynamic.

    The value is (s/2r)(y-k)^2 - (k/s) ln x - ((1-k)/s) ln(1-x) + c0, zero at
    (k, k) and positive elsewhere.  The time derivative is composed from the
    partial derivatives and the vector field; along replicator solutions it
    collapses to (x-k)^2, which the tests verify as an algebraic identity.
    """
    if p.r <= 0.0:
        raise DomainError("the Lyapunov diagnostic needs r > 0")
    x, y = state.x, state.y
    if not 0.0 < x < 1.0:
        raise DomainError(f"Lyapunov value diverges at x={x!r}")
    value = ((p.s / (2.0 * p.r)) * (y - p.k) ** 2
             - (p.k / p.s) * math.log(x)
             - ((1.0 - p.k) / p.s) * math.log(1.0 - x)
             + lyapunov_offset(p))
    dl_dx = -p.k / (p.s * x) + (1.0 - p.k) / (p.s * (1.0 - x))
    dl_dy = (p.s / p.r) * (y - p.k)
    derivative = (dl_dx * replicator_xdot(p.s, state)
                  + dl_dy * y_dot(p, x))
    return LyapunovEvaluation(value=value, time_derivative=derivative)


def lyapunov_along(p: ModelParams, traj: Trajectory) -> np.ndarray:
    """Lyapunov values at every trajectory sample (vectorized)."""
    x = np.asarray(traj.x)
    y = np.asarray(traj.y)
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise DomainError("trajectory touches a boundary face; L is undefined there")
    return ((p.s / (2.0 * p.r)) * (y - p.k) ** 2
            - (p.k / p.s) * np.log(x)
            - ((1.0 - p.k) / p.s) * np.log(1.0 - x)
            + lyapunov_offset(p))

"""The three laws of motion for the population share x.

Each dynamic is a planar vector field over (x, y) once paired with the shared
indifference-state law y_dot = (r/s)(x - k).  The best-response field is
set-valued on the diagonal x = y; this module reports the set and leaves the
selection policy to the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Union

from .game import DomainError, JointState, ModelParams


class DynamicKind(Enum):
    BEST_RESPONSE = "best_response"
    LOGIT = "logit"
    REPLICATOR = "replicator"


class Interval(NamedTuple):
    """Closed interval of admissible rates where a field is set-valued."""

    lo: float
    hi: float

    def __contains__(self, value: object) -> bool:
        return isinstance(value, (int, float)) and self.lo <= value <= self.hi


@dataclass(frozen=True)
class BRGeometry:
    """Diagonal thresholds of the best-response dynamic.

    Crossings land in [0, alpha) when coming from above the diagonal and in
    (beta, 1] when coming from below; sliding along the diagonal is feasible
    exactly on [alpha, beta].
    """

    alpha: float
    beta: float
    k: float

    @property
    def width(self) -> float:
        return self.beta - self.alpha


# x within this distance of 0/1 is treated as on the boundary: step-control
# overshoot below this scale must not flip the sign of x(1-x).
REPLICATOR_CLAMP = 1e-12


def br_xdot(state: JointState) -> Union[float, Interval]:
    """Best-response rate of x: 1-x above payoff, -x below, set-valued at a tie.

    The tie is exact equality of the stored floats; numeric callers apply
    their own tolerance band before consulting this field.
    """
    if state.x > state.y:
        return 1.0 - state.x
    if state.x < state.y:
        return -state.x
    return Interval(-state.x, 1.0 - state.x)


def logistic(z: float) -> float:
    """Overflow-safe logistic function exp(z)/(1 + exp(z)).

    Branches on the sign of the argument so that exp never overflows, which
    matters for eta small enough that s(x-y)/eta reaches +-1e4 and beyond.
    """
    if z <= 0.0:
        e = math.exp(z)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(-z))


def logit_choice_probability(s: float, eta: float, state: JointState) -> float:
    """Probability that a reviser picks Left: logistic in the payoff difference."""
    if eta <= 0.0:
        raise DomainError(f"noise level eta must be > 0, got {eta!r}")
    return logistic(s * (state.x - state.y) / eta)


def logit_xdot(s: float, eta: float, state: JointState) -> float:
    """Logit rate of x: choice probability minus current share."""
    return logit_choice_probability(s, eta, state) - state.x


def replicator_xdot(s: float, state: JointState) -> float:
    """Replicator rate of x: s * x(1-x) * (x - y); zero on both boundary faces."""
    x = state.x
    if x < 0.0:
        x = 0.0
    elif x > 1.0:
        x = 1.0
    return s * x * (1.0 - x) * (x - state.y)


def xdot(kind: DynamicKind, p: ModelParams, state: JointState) -> Union[float, Interval]:
    """Rate of x under the chosen dynamic (set-valued for BR on the diagonal)."""
    if kind is DynamicKind.BEST_RESPONSE:
        return br_xdot(state)
    if kind is DynamicKind.LOGIT:
        return logit_xdot(p.s, p.require_eta(), state)
    return replicator_xdot(p.s, state)


def br_geometry(p: ModelParams) -> BRGeometry:
    """Thresholds alpha = rk/(s+r) and beta = (s+rk)/(s+r); alpha < k < beta."""
    if p.r <= 0.0:
        raise DomainError("diagonal thresholds need r > 0")
    alpha = p.r * p.k / (p.s + p.r)
    beta = (p.s + p.r * p.k) / (p.s + p.r)
    return BRGeometry(alpha=alpha, beta=beta, k=p.k)


def sliding_feasible(p: ModelParams, x: float) -> bool:
    """Whether the diagonal can carry a sliding solution at population share x.

    Sliding requires the shared rate (r/s)(x - k) to be an admissible
    best-response rate, i.e. to lie in [-x, 1-x].  Equivalent to
    alpha <= x <= beta, which the tests check as an independent route.
    """
    rate = (p.r / p.s) * (x - p.k)
    return -x <= rate <= 1.0 - x

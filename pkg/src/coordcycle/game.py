"""Base game data: payoff matrices, model parameters, and the reduced state.

The interaction is a symmetric two-strategy game whose payoffs drift in
response to aggregate behavior.  Everything downstream works in reduced
coordinates: the population share x playing Left, the indifference state y
(the x at which both strategies pay the same), and the conserved alignment
s = a - b - c + d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ZeroAlignmentError(ZeroDivisionError):
    """The game is degenerate (s = 0): the indifference state is undefined."""


@dataclass(frozen=True)
class GamePayoffMatrix:
    """Payoffs of the symmetric 2x2 game (row = own strategy Left/Right).

    Also used for payoff *rate* matrices: the payoff-adjustment law returns
    an instance whose entries are time derivatives.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"payoff {name} must be finite, got {v!r}")

    @property
    def alignment(self) -> float:
        """Strength of the coordination incentive: a - b - c + d.

        Recomputed on every access; never cached, so it stays correct while
        the matrix entries are being integrated.
        """
        return self.a - self.b - self.c + self.d

    def indifference_state(self) -> float:
        """The x at which both strategies yield equal expected payoff.

        May lie outside [0, 1] once one strategy dominates.
        """
        s = self.alignment
        if s == 0.0:
            raise ZeroAlignmentError("alignment is zero; no indifference state")
        return (self.d - self.b) / s

    def payoffs(self, x: float) -> tuple[float, float]:
        """Expected payoffs (f_L, f_R) against a population playing Left with share x."""
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"population share x={x!r} outside [0, 1]")
        f_left = self.a * x + self.b * (1.0 - x)
        f_right = self.c * x + self.d * (1.0 - x)
        return f_left, f_right

    def is_coordination_game(self) -> bool:
        return self.a > self.c and self.d > self.b


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the joint behavior/preference dynamics.

    r      -- speed of payoff change relative to strategy revision (>= 0)
    k      -- relative depletion split of the two strategies, in (0, 1)
    x_hat  -- capacity replenishment rate, in (0, min(k, 1-k))
    s      -- alignment of the game (> 0; conserved by the adjustment law)
    eta    -- choice noise level (> 0); only the logit dynamic reads it
    """

    r: float
    k: float
    x_hat: float
    s: float
    eta: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0.0):
            raise DomainError(f"feedback speed r must be >= 0, got {self.r!r}")
        if not (math.isfinite(self.k) and 0.0 < self.k < 1.0):
            raise DomainError(f"depletion split k must lie in (0, 1), got {self.k!r}")
        cap = min(self.k, 1.0 - self.k)
        if not (math.isfinite(self.x_hat) and 0.0 < self.x_hat < cap):
            raise DomainError(
                f"capacity rate x_hat must lie in (0, {cap}), got {self.x_hat!r}"
            )
        if not (math.isfinite(self.s) and self.s > 0.0):
            raise DomainError(f"alignment s must be > 0, got {self.s!r}")
        if self.eta is not None and not (math.isfinite(self.eta) and self.eta > 0.0):
            raise DomainError(f"noise level eta must be > 0, got {self.eta!r}")

    def require_eta(self) -> float:
        if self.eta is None:
            raise DomainError("this operation needs a logit noise level eta")
        return self.eta


@dataclass(frozen=True)
class JointState:
    """A point of the joint dynamics: population share x and indifference state y."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and 0.0 <= self.x <= 1.0):
            raise DomainError(f"population share x={self.x!r} outside [0, 1]")
        if not math.isfinite(self.y):
            raise DomainError(f"indifference state y={self.y!r} must be finite")

    @property
    def on_diagonal(self) -> bool:
        return self.x == self.y


def payoff_difference(s: float, state: JointState) -> float:
    """Payoff advantage of Left over Right, in reduced coordinates: s * (x - y).

    Algebraically identical to f_L(x) - f_R(x) for any matrix realizing
    alignment s and indifference state y.
    """
    return s * (state.x - state.y)


def payoff_adjustment(p: ModelParams, x: float) -> GamePayoffMatrix:
    """Rate of change of the payoff matrix at population share x.

    Both entries of a row change at the same rate, so the alignment rate of
    the returned matrix is exactly zero.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"population share x={x!r} outside [0, 1]")
    left_rate = p.r * (p.x_hat - (1.0 - p.k) * x)
    right_rate = p.r * (p.x_hat - p.k * (1.0 - x))
    return GamePayoffMatrix(a=left_rate, b=left_rate, c=right_rate, d=right_rate)


def y_dot(p: ModelParams, x: float) -> float:
    """Rate of change of the indifference state: (r/s) * (x - k)."""
    return (p.r / p.s) * (x - p.k)

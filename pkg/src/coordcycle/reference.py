"""Fixed-step RK4 reference integrator.

An independent oracle for the adaptive and closed-form paths in ``solver``:
classic fourth-order Runge-Kutta at a caller-chosen step, sharing no code
with them.  The best-response field switches branches mid-run; a step that
straddles the diagonal is split by bisection on the step length so the switch
happens at the crossing rather than inside a stage.

Step counts reach millions at the reference step sizes the test suite uses,
so the inner loops are numba-compiled when numba is available; the plain
Python path produces bit-identical results, just slowly.
"""

from __future__ import annotations

import math

import numpy as np

from .fields import DynamicKind
from .game import DomainError, JointState, ModelParams

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(f):
            return f

        return deco


_KIND_IDS = {
    DynamicKind.BEST_RESPONSE: 0,
    DynamicKind.LOGIT: 1,
    DynamicKind.REPLICATOR: 2,
}


@njit(cache=True)
def _rates(kind_id, branch, rs, s, k, eta, x, y):
    if kind_id == 0:
        fx = 1.0 - x if branch > 0 else -x
    elif kind_id == 1:
        z = s * (x - y) / eta
        if z <= 0.0:
            e = math.exp(z)
            p = e / (1.0 + e)
        else:
            p = 1.0 / (1.0 + math.exp(-z))
        fx = p - x
    else:
        xc = min(max(x, 0.0), 1.0)
        fx = s * xc * (1.0 - xc) * (x - y)
    return fx, rs * (x - k)


@njit(cache=True)
def _rk4_step(kind_id, branch, rs, s, k, eta, x, y, h):
    k1x, k1y = _rates(kind_id, branch, rs, s, k, eta, x, y)
    k2x, k2y = _rates(kind_id, branch, rs, s, k, eta,
                      x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = _rates(kind_id, branch, rs, s, k, eta,
                      x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = _rates(kind_id, branch, rs, s, k, eta,
                      x + h * k3x, y + h * k3y)
    return (x + h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0,
            y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0)


@njit(cache=True)
def _advance(kind_id, branch, rs, s, k, eta, alpha, beta, x, y, h):
    """One step of size h; for BR, split at a diagonal crossing and switch."""
    xn, yn = _rk4_step(kind_id, branch, rs, s, k, eta, x, y, h)
    if kind_id != 0 or rs == 0.0:
        return xn, yn, branch
    g_new = xn - yn
    if (branch > 0 and g_new >= 0.0) or (branch < 0 and g_new <= 0.0):
        return xn, yn, branch
    # bisect the step length to land on the crossing
    lo = 0.0
    hi = h
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        xm, ym = _rk4_step(kind_id, branch, rs, s, k, eta, x, y, mid)
        gm = xm - ym
        if gm == 0.0:
            lo = mid
            hi = mid
            break
        if (branch > 0 and gm > 0.0) or (branch < 0 and gm < 0.0):
            lo = mid
        else:
            hi = mid
    dt_cross = 0.5 * (lo + hi)
    xc, yc = _rk4_step(kind_id, branch, rs, s, k, eta, x, y, dt_cross)
    new_branch = 1 if xc <= alpha else -1
    xn, yn = _rk4_step(kind_id, new_branch, rs, s, k, eta, xc, yc, h - dt_cross)
    return xn, yn, new_branch


@njit(cache=True)
def _rk4_path(kind_id, branch, rs, s, k, eta, alpha, beta, x, y, h, t_out):
    out = np.empty((t_out.shape[0], 2))
    t = 0.0
    for i in range(t_out.shape[0]):
        target = t_out[i]
        while t + h <= target:
            x, y, branch = _advance(kind_id, branch, rs, s, k, eta,
                                    alpha, beta, x, y, h)
            t += h
        if target > t:
            x, y, branch = _advance(kind_id, branch, rs, s, k, eta,
                                    alpha, beta, x, y, target - t)
            t = target
        out[i, 0] = x
        out[i, 1] = y
    return out


def reference_states(kind: DynamicKind, p: ModelParams, init: JointState,
                     h: float, times) -> np.ndarray:
    """States at the requested times from fixed-step RK4 at step h.

    Returns an array of shape (len(times), 2) with columns (x, y).  Times
    must be nondecreasing.  Best-response runs must start off the diagonal
    (the reference has no diagonal selection policy).
    """
    if h <= 0.0:
        raise DomainError(f"step size must be > 0, got {h!r}")
    t_out = np.asarray(times, dtype=float)
    if np.any(np.diff(t_out) < 0.0):
        raise DomainError("output times must be nondecreasing")
    kind_id = _KIND_IDS[kind]
    eta = p.require_eta() if kind is DynamicKind.LOGIT else 1.0
    branch = 0
    alpha = 0.0
    beta = 1.0
    if kind is DynamicKind.BEST_RESPONSE:
        if init.x == init.y:
            raise DomainError("the reference integrator needs an off-diagonal start")
        branch = 1 if init.x > init.y else -1
        if p.r > 0.0:
            alpha = p.r * p.k / (p.s + p.r)
            beta = (p.s + p.r * p.k) / (p.s + p.r)
    return _rk4_path(kind_id, branch, p.r / p.s, p.s, p.k, eta,
                     alpha, beta, init.x, init.y, h, t_out)

"""
The positive-quadrant example ``f(x) = phi(x2 / x1 - 2, x2 - 1)`` over ``x > 0``.

``g(x) = (x2 / x1, x2)`` maps the quadrant onto itself diffeomorphically and
turns f into the convex ``h(y) = phi(y1 - 2, y2 - 1)``, with ``phi`` the squared
Euclidean norm (smooth variant) or the l1 norm (nonsmooth variant).
"""

import cvxpy as cp
import numpy as np

from ecl_control.errors import DegeneratePointError, SolverFailure

SMOOTH = "smooth"
NONSMOOTH = "nonsmooth"
VARIANTS = (SMOOTH, NONSMOOTH)

Y_STAR = np.array([2.0, 1.0])


def _phi(d: np.ndarray, variant: str) -> float:
    if variant == SMOOTH:
        return float(d @ d)
    if variant == NONSMOOTH:
        return float(np.abs(d).sum())
    raise ValueError("unknown variant '{}', expected one of {}".format(variant, VARIANTS))


def _positive(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (2,) or np.any(v <= 0):
        raise DegeneratePointError("{} must be a point of the open positive quadrant, got {}".format(name, v))
    return v


def academic_g(x) -> np.ndarray:
    x = _positive(x, "x")
    return np.array([x[1] / x[0], x[1]])


def academic_g_inv(y) -> np.ndarray:
    y = _positive(y, "y")
    return np.array([y[1] / y[0], y[1]])


def academic_f(x, variant: str = SMOOTH) -> float:
    return academic_h(academic_g(x), variant)


def academic_h(y, variant: str = SMOOTH) -> float:
    y = np.asarray(y, dtype=float).reshape(-1)
    return _phi(y - Y_STAR, variant)


def academic_minimize(variant: str = SMOOTH):
    """Minimize h over the closed quadrant and map back; returns ``(x*, f*)``."""
    y = cp.Variable(2)
    d = y - Y_STAR
    obj = cp.sum_squares(d) if variant == SMOOTH else cp.norm1(d)
    prob = cp.Problem(cp.Minimize(obj), [y >= 0])
    prob.solve(solver=cp.CLARABEL)
    if prob.status != cp.OPTIMAL:
        raise SolverFailure("academic example returned {}".format(prob.status), prob.status)
    x = academic_g_inv(np.asarray(y.value))
    return x, academic_f(x, variant)

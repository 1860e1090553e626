"""
Closed forms for the two-state LQR instance ``A = diag(-2, 1)``, ``B = [0; 1]``,
``W = 4I``, ``Q = I``, ``R = 1``: the cost over the stabilizing region
``k2 < -1``, the map ``y = K X_K`` onto the convex image, its inverse and the
convex cost ``h(y) = -y2 - 1 + y aff(y)^-1 y^T``.
"""

import numpy as np
import scipy.linalg as la

from ecl_control.conic import SdpProblem, bmat, solve_with_config
from ecl_control.errors import DegeneratePointError, NotHurwitzError, SolverFailure
from ecl_control.plant import Plant


def two_state_plant() -> Plant:
    return Plant.from_weights(
        A=np.diag([-2.0, 1.0]), B=[[0.0], [1.0]], W=4.0 * np.eye(2), Q=np.eye(2), R=[[1.0]]
    )


def _gain(k):
    k = np.asarray(k, dtype=float).reshape(-1)
    if k[1] >= -1.0:
        raise NotHurwitzError("k2={:.6g} is not stabilizing (need k2 < -1)".format(k[1]))
    return k[0], k[1]


def two_state_cost(k) -> float:
    k1, k2 = _gain(k)
    return (1 - 2 * k2 + 3 * k2 ** 2 - 2 * k2 ** 3 - 2 * k1 ** 2 * k2) / (k2 ** 2 - 1)


def two_state_map(k) -> np.ndarray:
    k1, k2 = _gain(k)
    return np.array([k1 / (1 - k2), (2 * k2 - k1 ** 2 - 2 * k2 ** 2) / (k2 ** 2 - 1)])


def two_state_aff(y) -> np.ndarray:
    """The closed-loop Gramian as an affine function of y."""
    y1, y2 = np.asarray(y, dtype=float).reshape(-1)
    return np.array([[1.0, y1], [y1, -y2 - 2.0]])


def _check_domain(y) -> np.ndarray:
    X = two_state_aff(y)
    if np.linalg.eigvalsh(X)[0] <= 0:
        raise DegeneratePointError("y={} lies outside the convex image (aff(y) is not PD)".format(list(y)))
    return X


def two_state_inverse(y) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    return la.solve(_check_domain(y), y, assume_a="pos")


def two_state_convex_cost(y) -> float:
    y = np.asarray(y, dtype=float).reshape(-1)
    X = _check_domain(y)
    return float(-y[1] - 1.0 + y @ la.solve(X, y, assume_a="pos"))


def two_state_sdp() -> SdpProblem:
    """Schur-complement epigraph ``[[t + y2 + 1, y], [y^T, aff(y)]] >= 0``."""
    prob = SdpProblem("two-state")
    t = prob.scalar("t")
    y = prob.matrix("y", 1, 2)
    y1, y2 = y[0, 0], y[0, 1]
    prob.add_lmi(
        bmat([[t + y2 + 1.0, y1, y2], [y1, 1.0, y1], [y2, y1, -y2 - 2.0]]),
        name="epigraph",
    )
    prob.add_lmi(bmat([[1.0, y1], [y1, -y2 - 2.0]]), strict=True, name="aff")
    prob.minimize(t)
    return prob


def two_state_solve(solver_cfg=None):
    """Returns ``(t*, y*, k*)``."""
    sol = solve_with_config(two_state_sdp(), solver_cfg)
    if not sol.usable:
        raise SolverFailure("two-state SDP returned {}".format(sol.status), str(sol.status))
    y = np.asarray(sol.values["y"]).reshape(-1)
    return float(sol.values["t"]), y, two_state_inverse(y)

"""
LQR over static state feedback: cost, gradient, the lifted set
{(K, gamma, X)}, its diffeomorphic image {(gamma, Y, X)} and the SDP over
that image.

Costs are squared H2 norms: ``J(K) = tr((Q + K^T R K) X_K) = tr(P_K W)``.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import cvxpy as cp
import numpy as np
import scipy.linalg as la

from ecl_control.conic import SdpProblem, SdpSolution, SdpStatus, bmat, solve_with_config
from ecl_control.dataclass.utils import config_get
from ecl_control.errors import (
    DegeneratePointError,
    NotHurwitzError,
    NotInEpigraphError,
    PreconditionError,
    SolverFailure,
)
from ecl_control.linalg import (
    is_hurwitz,
    lqr_gain,
    lyapunov_operator,
    min_eig,
    solve_lyapunov_ct,
    solve_riccati_ct,
    sym,
)
from ecl_control.plant import Plant, gain_matrix

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-8
SINGULAR_TOL = 1e-12
ELIMINATION_MAX_COND = 1e12


@dataclass(frozen=True, eq=False)
class LqrLiftedPoint:
    K: np.ndarray
    gamma: float
    X: np.ndarray


@dataclass(frozen=True, eq=False)
class LqrConvexPoint:
    gamma: float
    Y: np.ndarray
    X: np.ndarray


@dataclass(frozen=True, eq=False)
class LqrSolution:
    status: SdpStatus
    gamma: float
    K: Optional[np.ndarray]
    Y: Optional[np.ndarray]
    X: Optional[np.ndarray]
    sdp: Optional[SdpSolution] = None


def _closed_loop(plant: Plant, K) -> Tuple[np.ndarray, np.ndarray]:
    K = gain_matrix(K)
    Acl = plant.A + plant.B @ K
    if not is_hurwitz(Acl):
        raise NotHurwitzError("K is not stabilizing: the LQR cost is infinite")
    return K, Acl


def lqr_lyapunov_pair(plant: Plant, K) -> Tuple[np.ndarray, np.ndarray]:
    """(X_K, P_K): ``Acl X + X Acl^T + W = 0`` and ``Acl^T P + P Acl + Q + K^T R K = 0``."""
    K, Acl = _closed_loop(plant, K)
    X = solve_lyapunov_ct(Acl, plant.W)
    P = solve_lyapunov_ct(Acl.T, plant.Q + K.T @ plant.R @ K)
    return X, P


def lqr_cost(plant: Plant, K) -> float:
    K = gain_matrix(K)
    X, P = lqr_lyapunov_pair(plant, K)
    primal = float(np.trace((plant.Q + K.T @ plant.R @ K) @ X))
    dual = float(np.trace(P @ plant.W))
    if abs(primal - dual) > 1e-9 * max(1.0, abs(primal)):
        logger.warning("LQR trace formulas disagree: {:.12g} vs {:.12g}".format(primal, dual))
    return primal


def lqr_grad(plant: Plant, K) -> np.ndarray:
    """``2 (R K + B^T P_K) X_K``."""
    K = gain_matrix(K)
    X, P = lqr_lyapunov_pair(plant, K)
    return 2.0 * (plant.R @ K + plant.B.T @ P) @ X


def lqr_riccati_optimum(plant: Plant) -> Tuple[float, np.ndarray]:
    """Optimal cost ``tr(P* W)`` and gain ``K* = -R^-1 B^T P*``."""
    P = solve_riccati_ct(plant.A, plant.B, plant.Q, plant.R)
    K = lqr_gain(plant.A, plant.B, plant.Q, plant.R)
    return float(np.trace(P @ plant.W)), K


def lqr_lift(plant: Plant, K, gamma: float, tol: float = MEMBERSHIP_TOL) -> LqrLiftedPoint:
    """Lift (K, gamma) with the closed-loop Gramian; every stabilizing K lifts at its own cost."""
    K = gain_matrix(K)
    X, _ = lqr_lyapunov_pair(plant, K)
    cost = float(np.trace((plant.Q + K.T @ plant.R @ K) @ X))
    if gamma < cost - tol * max(1.0, abs(cost)):
        raise NotInEpigraphError("gamma={:.10g} is below the LQR cost {:.10g}".format(gamma, cost))
    return LqrLiftedPoint(K=K.copy(), gamma=float(gamma), X=X)


def lqr_convex_cost(plant: Plant, Y: np.ndarray, X: np.ndarray) -> float:
    """``tr(Q X + X^-1 Y^T R Y)``."""
    return float(np.trace(plant.Q @ X) + np.trace(la.solve(X, Y.T @ plant.R @ Y, assume_a="pos")))


def lqr_equality_residual(plant: Plant, Y: np.ndarray, X: np.ndarray) -> float:
    E = plant.A @ X + plant.B @ Y
    E = E + E.T + plant.W
    return float(np.linalg.norm(E)) / (1.0 + float(np.linalg.norm(plant.W)))


def _check_x(X: np.ndarray) -> None:
    if min_eig(X) <= SINGULAR_TOL * max(1.0, np.abs(X).max(initial=0.0)):
        raise DegeneratePointError("X is singular or indefinite (min eigenvalue {:.3e})".format(min_eig(X)))


def lqr_phi(pt: LqrLiftedPoint) -> LqrConvexPoint:
    _check_x(pt.X)
    return LqrConvexPoint(gamma=pt.gamma, Y=pt.K @ pt.X, X=pt.X.copy())


def lqr_psi(cp_: LqrConvexPoint) -> LqrLiftedPoint:
    _check_x(cp_.X)
    K = la.solve(cp_.X.T, cp_.Y.T).T
    return LqrLiftedPoint(K=K, gamma=cp_.gamma, X=cp_.X.copy())


def lqr_is_lifted(plant: Plant, pt: LqrLiftedPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    Acl = plant.A + plant.B @ pt.K
    res = Acl @ pt.X + pt.X @ Acl.T + plant.W
    if np.linalg.norm(res) > tol * (1.0 + np.linalg.norm(plant.W)) or min_eig(pt.X) <= 0:
        return False
    return pt.gamma >= float(np.trace((plant.Q + pt.K.T @ plant.R @ pt.K) @ pt.X)) - tol


def lqr_is_convex_member(plant: Plant, cp_: LqrConvexPoint, tol: float = MEMBERSHIP_TOL) -> bool:
    if min_eig(cp_.X) <= 0 or lqr_equality_residual(plant, cp_.Y, cp_.X) > tol:
        return False
    return cp_.gamma >= lqr_convex_cost(plant, cp_.Y, cp_.X) - tol


def _eliminated_x(plant: Plant, Y) -> Optional[cp.Expression]:
    """X as an affine function of Y, when the Lyapunov operator of A is invertible."""
    n = plant.n
    L = lyapunov_operator(plant.A)
    if np.linalg.cond(L) > ELIMINATION_MAX_COND:
        return None
    Linv = la.inv(L)
    rhs = plant.B @ Y
    rhs = rhs + rhs.T + plant.W
    vec_x = -Linv @ cp.vec(rhs, order="F")
    X = cp.reshape(vec_x, (n, n), order="F")
    return 0.5 * (X + X.T)


def lqr_sdp(plant: Plant, eliminate: bool = True) -> SdpProblem:
    """min gamma over {(gamma, Y, X)}: ``AX + BY + (AX + BY)^T + W = 0`` and
    ``gamma >= tr(QX) + tr(Z)`` with ``[[Z, R^1/2 Y], [Y^T R^1/2, X]] >= 0``."""
    if min_eig(plant.W) <= SINGULAR_TOL:
        raise PreconditionError("the LQR SDP needs W = Bw Bw^T positive definite")
    n, m = plant.n, plant.m
    prob = SdpProblem("lqr")
    gamma = prob.scalar("gamma")
    Y = prob.matrix("Y", m, n)
    Z = prob.symmetric("Z", m)

    X = _eliminated_x(plant, Y) if eliminate else None
    if X is None:
        if eliminate:
            logger.info("Lyapunov operator of A is singular; keeping X with an equality constraint")
        X = prob.symmetric("X", n)
        E = plant.A @ X + plant.B @ Y
        prob.add_equality(E + E.T + plant.W, name="lyapunov")
    else:
        prob.define("X", X)

    R_sqrt = plant.R_sqrt
    prob.add_lmi(bmat([[Z, R_sqrt @ Y], [Y.T @ R_sqrt, X]]), name="epigraph")
    prob.add_lmi(X, strict=True, name="X")
    prob.add_lmi(bmat([[gamma - cp.trace(plant.Q @ X) - cp.trace(Z)]]), name="gamma")
    prob.minimize(gamma)
    return prob


def lqr_solve(plant: Plant, solver_cfg=None) -> LqrSolution:
    prob = lqr_sdp(plant, eliminate=config_get(solver_cfg, "eliminate_equalities", True))
    sol = solve_with_config(prob, solver_cfg)
    if not sol.usable:
        raise SolverFailure("LQR SDP returned {}".format(sol.status), str(sol.status))
    Y, X = np.atleast_2d(sol.values["Y"]), sym(np.atleast_2d(sol.values["X"]))
    K = None
    if min_eig(X) > SINGULAR_TOL:
        K = la.solve(X.T, Y.T).T
    logger.debug("LQR SDP: {} gamma={:.10g}".format(sol.status, sol.objective))
    return LqrSolution(status=sol.status, gamma=float(sol.values["gamma"]), K=K, Y=Y, X=X, sdp=sol)


def lqr_convex_path(
    plant: Plant, K_from, K_to, ts: Sequence[float]
) -> Sequence[np.ndarray]:
    """Policies along the straight segment between the convex images of two stabilizing gains."""
    a = lqr_phi(lqr_lift(plant, K_from, lqr_cost(plant, K_from)))
    b = lqr_phi(lqr_lift(plant, K_to, lqr_cost(plant, K_to)))
    path = []
    for t in ts:
        Y = (1 - t) * a.Y + t * b.Y
        X = (1 - t) * a.X + t * b.X
        path.append(la.solve(X.T, Y.T).T)
    return path

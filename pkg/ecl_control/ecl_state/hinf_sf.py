"""
State-feedback H-infinity: cost, peak subgradients, the lifted set
{(K, gamma, P)} given by the bounded real LMI, its image {(gamma, Y, X)} and
the synthesis SDP.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import cvxpy as cp
import numpy as np
import scipy.linalg as la

from ecl_control.conic import SdpProblem, SdpSolution, SdpStatus, bmat, solve_with_config
from ecl_control.errors import (
    DegeneratePointError,
    NotHurwitzError,
    NotInEpigraphError,
    SolverFailure,
)
from ecl_control.linalg import is_hurwitz, min_eig, sym
from ecl_control.norms import HinfResult, hinf_norm_with_peaks, nsd_violation
from ecl_control.plant import Plant, gain_matrix, state_feedback_closed_loop
from ecl_control.ecl_state.stationarity import (
    clarke_stationarity_measure,
    default_peaks,
    extreme_peak_weights,
    peak_subgradient,
)

logger = logging.getLogger(__name__)

NORM_REL_TOL = 1e-8
LMI_TOL = 1e-7
SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HinfSfLiftedPoint:
    K: np.ndarray
    gamma: float
    P: np.ndarray


@dataclass(frozen=True, eq=False)
class HinfSfConvexPoint:
    gamma: float
    Y: np.ndarray
    X: np.ndarray


@dataclass(frozen=True, eq=False)
class HinfSfSolution:
    status: SdpStatus
    gamma: float
    K: Optional[np.ndarray]
    Y: np.ndarray
    X: np.ndarray
    sdp: Optional[SdpSolution] = None


def hinf_sf_norm(plant: Plant, K, rel_tol: float = NORM_REL_TOL) -> HinfResult:
    cl = state_feedback_closed_loop(plant, K)
    if not is_hurwitz(cl.Acl):
        raise NotHurwitzError("K is not stabilizing: the H-infinity cost is infinite")
    return hinf_norm_with_peaks(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, rel_tol=rel_tol)


def hinf_sf_cost(plant: Plant, K, rel_tol: float = NORM_REL_TOL) -> float:
    return hinf_sf_norm(plant, K, rel_tol).norm


def hinf_sf_subgradient(
    plant: Plant, K, peaks: Sequence[Tuple[complex, np.ndarray]], cost: Optional[float] = None
) -> np.ndarray:
    """Subgradient of the H-infinity cost at K for the given peak weights.

    With ``R = (sI - A - BK)^-1`` the closed-loop response varies as
    ``dT = ([0; R^1/2] + Ccl R B) dK (R Bw)``.
    """
    K = gain_matrix(K)
    cl = state_feedback_closed_loop(plant, K)
    if cost is None:
        cost = hinf_sf_cost(plant, K)
    lead = np.vstack([np.zeros((plant.n, plant.m)), plant.R_sqrt])
    return peak_subgradient(
        cl,
        cost,
        peaks,
        left=lambda R: lead + cl.Ccl @ R @ plant.B,
        right=lambda R: R @ plant.Bw,
    )


def hinf_sf_default_subgradient(plant: Plant, K) -> np.ndarray:
    res = hinf_sf_norm(plant, K)
    cl = state_feedback_closed_loop(plant, K)
    return hinf_sf_subgradient(plant, K, default_peaks(cl, res.peaks), cost=res.norm)


def hinf_sf_extreme_subgradients(plant: Plant, K) -> List[np.ndarray]:
    res = hinf_sf_norm(plant, K)
    cl = state_feedback_closed_loop(plant, K)
    return [
        hinf_sf_subgradient(plant, K, peaks, cost=res.norm)
        for peaks in extreme_peak_weights(cl, res.peaks)
    ]


def hinf_sf_stationarity(plant: Plant, K) -> float:
    return clarke_stationarity_measure(hinf_sf_extreme_subgradients(plant, K))


def hinf_sf_lifted_matrix(plant: Plant, K, gamma: float, P: np.ndarray) -> np.ndarray:
    """Bounded real LMI of the closed loop in P (must be NSD)."""
    K = gain_matrix(K)
    n, m, nw = plant.n, plant.m, plant.nw
    Acl = plant.A + plant.B @ K
    Qh, Rh = plant.Q_sqrt, plant.R_sqrt
    Z = np.zeros
    return np.block(
        [
            [Acl.T @ P + P @ Acl, P @ plant.Bw, Qh, K.T @ Rh],
            [plant.Bw.T @ P, -gamma * np.eye(nw), Z((nw, n)), Z((nw, m))],
            [Qh, Z((n, nw)), -gamma * np.eye(n), Z((n, m))],
            [Rh @ K, Z((m, nw)), Z((m, n)), -gamma * np.eye(m)],
        ]
    )


def _convex_blocks(plant: Plant, gamma, Y, X):
    n, m, nw = plant.n, plant.m, plant.nw
    Qh, Rh = plant.Q_sqrt, plant.R_sqrt
    AXBY = plant.A @ X + plant.B @ Y
    Z = np.zeros
    return [
        [AXBY + AXBY.T, plant.Bw, X @ Qh, Y.T @ Rh],
        [plant.Bw.T, -gamma * np.eye(nw), Z((nw, n)), Z((nw, m))],
        [Qh @ X, Z((n, nw)), -gamma * np.eye(n), Z((n, m))],
        [Rh @ Y, Z((m, nw)), Z((m, n)), -gamma * np.eye(m)],
    ]


def hinf_sf_convex_matrix(plant: Plant, gamma: float, Y: np.ndarray, X: np.ndarray) -> np.ndarray:
    """The LMI over (gamma, Y, X) (must be NSD, with X > 0)."""
    return np.block(_convex_blocks(plant, gamma, Y, X))


def hinf_sf_is_lifted(plant: Plant, pt: HinfSfLiftedPoint, tol: float = LMI_TOL) -> bool:
    return min_eig(pt.P) > 0 and nsd_violation(hinf_sf_lifted_matrix(plant, pt.K, pt.gamma, pt.P)) <= tol


def hinf_sf_is_convex_member(plant: Plant, cp_: HinfSfConvexPoint, tol: float = LMI_TOL) -> bool:
    return min_eig(cp_.X) > 0 and nsd_violation(hinf_sf_convex_matrix(plant, cp_.gamma, cp_.Y, cp_.X)) <= tol


def hinf_sf_lift(
    plant: Plant, K, gamma: float, lmi_tol: float = LMI_TOL, solver_cfg=None
) -> HinfSfLiftedPoint:
    """Lift (K, gamma) by the minimum-trace P satisfying the bounded real LMI."""
    K = gain_matrix(K)
    cost = hinf_sf_cost(plant, K)
    if gamma < cost * (1.0 - 1e-8):
        raise NotInEpigraphError("gamma={:.10g} is below the H-infinity cost {:.10g}".format(gamma, cost))

    prob = SdpProblem("hinf-sf-lift")
    P = prob.symmetric("P", plant.n)
    n, m, nw = plant.n, plant.m, plant.nw
    Acl = plant.A + plant.B @ K
    Qh, Rh = plant.Q_sqrt, plant.R_sqrt
    Z = np.zeros
    prob.add_lmi(
        bmat(
            [
                [Acl.T @ P + P @ Acl, P @ plant.Bw, Qh, K.T @ Rh],
                [plant.Bw.T @ P, -gamma * np.eye(nw), Z((nw, n)), Z((nw, m))],
                [Qh, Z((n, nw)), -gamma * np.eye(n), Z((n, m))],
                [Rh @ K, Z((m, nw)), Z((m, n)), -gamma * np.eye(m)],
            ]
        ),
        sense="nsd",
        name="bounded-real",
    )
    prob.add_lmi(P, strict=True, name="P")
    prob.minimize(cp.trace(P))
    sol = solve_with_config(prob, solver_cfg)
    if sol.status == SdpStatus.INFEASIBLE:
        raise NotInEpigraphError("no P certifies gamma={:.10g}".format(gamma))
    if not sol.usable:
        raise SolverFailure("H-infinity lift returned {}".format(sol.status), str(sol.status))
    Pv = sym(np.atleast_2d(sol.values["P"]))
    violation = nsd_violation(hinf_sf_lifted_matrix(plant, K, gamma, Pv))
    if violation > lmi_tol or min_eig(Pv) <= 0:
        raise SolverFailure(
            "H-infinity lift certificate fails the recheck (violation {:.2e})".format(violation),
            str(sol.status),
        )
    return HinfSfLiftedPoint(K=K.copy(), gamma=float(gamma), P=Pv)


def hinf_sf_phi(pt: HinfSfLiftedPoint) -> HinfSfConvexPoint:
    """(K, gamma, P) -> (gamma, K P^-1, P^-1)."""
    if min_eig(pt.P) <= SINGULAR_TOL:
        raise DegeneratePointError("P is singular")
    X = sym(la.inv(pt.P))
    return HinfSfConvexPoint(gamma=pt.gamma, Y=pt.K @ X, X=X)


def hinf_sf_psi(cp_: HinfSfConvexPoint) -> HinfSfLiftedPoint:
    """(gamma, Y, X) -> (Y X^-1, gamma, X^-1)."""
    if min_eig(cp_.X) <= SINGULAR_TOL:
        raise DegeneratePointError("X is singular")
    P = sym(la.inv(cp_.X))
    return HinfSfLiftedPoint(K=cp_.Y @ P, gamma=cp_.gamma, P=P)


def hinf_sf_sdp(plant: Plant) -> SdpProblem:
    n, m = plant.n, plant.m
    prob = SdpProblem("hinf-sf")
    gamma = prob.scalar("gamma")
    Y = prob.matrix("Y", m, n)
    X = prob.symmetric("X", n)
    prob.add_lmi(bmat(_convex_blocks(plant, gamma, Y, X)), sense="nsd", name="bounded-real")
    prob.add_lmi(X, strict=True, name="X")
    prob.minimize(gamma)
    return prob


def hinf_sf_solve(plant: Plant, solver_cfg=None) -> HinfSfSolution:
    """Solve the synthesis SDP; on NEAR_BOUNDARY the returned K may be huge or absent."""
    sol = solve_with_config(hinf_sf_sdp(plant), solver_cfg)
    if not sol.usable:
        raise SolverFailure("H-infinity SDP returned {}".format(sol.status), str(sol.status))
    Y = np.atleast_2d(sol.values["Y"])
    X = sym(np.atleast_2d(sol.values["X"]))
    K = la.solve(X.T, Y.T).T if min_eig(X) > SINGULAR_TOL else None
    if sol.status == SdpStatus.NEAR_BOUNDARY:
        logger.info(
            "H-infinity SDP optimum {:.8g} is not attained (min eig X {:.2e})".format(sol.objective, min_eig(X))
        )
    return HinfSfSolution(status=sol.status, gamma=float(sol.values["gamma"]), K=K, Y=Y, X=X, sdp=sol)

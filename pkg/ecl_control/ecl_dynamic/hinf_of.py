"""
Output-feedback H-infinity over full-order dynamic policies (DK free).

The lifted set pairs a policy with a bounded real certificate P whose P12
block is invertible; the same change of variables as for LQG maps it onto
``{(gamma, Lambda, X, Y) : M(gamma, Lambda, X, Y) <= 0}`` times GL_n.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import cvxpy as cp
import numpy as np

from ecl_control.conic import SdpProblem, SdpSolution, SdpStatus, bmat, solve_with_config
from ecl_control.dataclass.utils import config_get
from ecl_control.errors import (
    DegeneratePointError,
    NotHurwitzError,
    NotInEpigraphError,
    SolverFailure,
)
from ecl_control.linalg import is_hurwitz, min_eig, sym
from ecl_control.norms import HinfResult, bounded_real_matrix, hinf_norm_with_peaks, nsd_violation
from ecl_control.plant import ClosedLoop, DynamicPolicy, OutputPlant, assemble_closed_loop
from ecl_control.ecl_state.descent import DescentResult, policy_descent
from ecl_control.ecl_state.stationarity import (
    clarke_stationarity_measure,
    default_peaks,
    extreme_peak_weights,
    peak_subgradient,
)
from ecl_control.ecl_dynamic.maps import (
    P12_MARGIN,
    AuxGl,
    check_xy,
    p12_margin,
    phi_lambda,
    psi_k,
    psi_p,
    unpack_lambda,
)

logger = logging.getLogger(__name__)

NORM_REL_TOL = 1e-8
LMI_TOL = 1e-7
TRACE_CAP = 1e6
RECOVERY_BACKOFF = 1e-4
RECOVERY_CAP = 1e4


@dataclass(frozen=True, eq=False)
class HinfOfLiftedPoint:
    K: DynamicPolicy
    gamma: float
    P: np.ndarray


@dataclass(frozen=True, eq=False)
class HinfOfConvexPoint:
    gamma: float
    Lam: np.ndarray
    X: np.ndarray
    Y: np.ndarray


@dataclass(frozen=True, eq=False)
class HinfOfSolution:
    status: SdpStatus
    gamma: float
    K: Optional[DynamicPolicy]
    # level at which the policy was recovered (gamma backed off)
    level: Optional[float]
    point: Optional[HinfOfConvexPoint]
    sdp: Optional[SdpSolution] = None


def _stable_loop(plant: OutputPlant, K: DynamicPolicy) -> ClosedLoop:
    cl = assemble_closed_loop(plant, K)
    if not is_hurwitz(cl.Acl):
        raise NotHurwitzError("policy is not internally stabilizing: the H-infinity cost is infinite")
    return cl


def hinf_of_norm(plant: OutputPlant, K: DynamicPolicy, rel_tol: float = NORM_REL_TOL) -> HinfResult:
    cl = _stable_loop(plant, K)
    return hinf_norm_with_peaks(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, rel_tol=rel_tol)


def hinf_of_cost(plant: OutputPlant, K: DynamicPolicy, rel_tol: float = NORM_REL_TOL) -> float:
    return hinf_of_norm(plant, K, rel_tol).norm


def hinf_of_subgradient(
    plant: OutputPlant,
    K: DynamicPolicy,
    peaks: Sequence[Tuple[complex, np.ndarray]],
    cost: Optional[float] = None,
) -> np.ndarray:
    """Subgradient with respect to the packed policy ``[[DK, CK], [BK, AK]]``.

    The closed loop depends on the packed policy through
    ``dT = (D12_bar + Ccl R B_bar) dK (C_bar R Bcl + D21_bar)`` with
    ``B_bar = diag(B2, I)``, ``C_bar = diag(C2, I)``, ``D12_bar = [D12, 0]``
    and ``D21_bar = [D21; 0]``.
    """
    n, m, p = plant.n, plant.m, plant.p
    cl = _stable_loop(plant, K)
    if cost is None:
        cost = hinf_of_cost(plant, K)
    B_bar = np.block([[plant.B2, np.zeros((n, n))], [np.zeros((n, m)), np.eye(n)]])
    C_bar = np.block([[plant.C2, np.zeros((p, n))], [np.zeros((n, n)), np.eye(n)]])
    D12_bar = np.hstack([plant.D12, np.zeros((n + m, n))])
    D21_bar = np.vstack([plant.D21, np.zeros((n, n + p))])
    return peak_subgradient(
        cl,
        cost,
        peaks,
        left=lambda R: D12_bar + cl.Ccl @ R @ B_bar,
        right=lambda R: C_bar @ R @ cl.Bcl + D21_bar,
    )


def hinf_of_default_subgradient(plant: OutputPlant, K: DynamicPolicy) -> np.ndarray:
    res = hinf_of_norm(plant, K)
    cl = assemble_closed_loop(plant, K)
    return hinf_of_subgradient(plant, K, default_peaks(cl, res.peaks), cost=res.norm)


def hinf_of_extreme_subgradients(plant: OutputPlant, K: DynamicPolicy) -> List[np.ndarray]:
    res = hinf_of_norm(plant, K)
    cl = assemble_closed_loop(plant, K)
    return [
        hinf_of_subgradient(plant, K, peaks, cost=res.norm)
        for peaks in extreme_peak_weights(cl, res.peaks)
    ]


def hinf_of_stationarity(plant: OutputPlant, K: DynamicPolicy) -> float:
    return clarke_stationarity_measure(hinf_of_extreme_subgradients(plant, K))


def hinf_of_descent(plant: OutputPlant, K0: DynamicPolicy, **kwargs) -> DescentResult:
    n, m, p = plant.n, plant.m, plant.p

    def unpack(x):
        return DynamicPolicy.from_packed(x, n, m, p)

    return policy_descent(
        lambda x: hinf_of_cost(plant, unpack(x)),
        lambda x: hinf_of_default_subgradient(plant, unpack(x)),
        K0.packed,
        **kwargs,
    )


# lifted set


def hinf_of_lifted_matrix(plant: OutputPlant, K: DynamicPolicy, gamma: float, P: np.ndarray) -> np.ndarray:
    cl = assemble_closed_loop(plant, K)
    return bounded_real_matrix(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, gamma, P)


def hinf_of_is_lifted(
    plant: OutputPlant, pt: HinfOfLiftedPoint, tol: float = LMI_TOL, margin: float = P12_MARGIN
) -> bool:
    if min_eig(pt.P) <= 0 or p12_margin(pt.P, plant.n) < margin:
        return False
    return nsd_violation(hinf_of_lifted_matrix(plant, pt.K, pt.gamma, pt.P)) <= tol


def hinf_of_lift_feasibility(
    plant: OutputPlant,
    K: DynamicPolicy,
    gamma: float,
    p12_margin_tol: float = P12_MARGIN,
    lmi_tol: float = LMI_TOL,
    solver_cfg=None,
) -> Optional[np.ndarray]:
    """Bounded real certificate P > 0 with invertible P12, or None (possibly degenerate)."""
    cl = _stable_loop(plant, K)
    if gamma < hinf_of_cost(plant, K) * (1.0 - 1e-8):
        return None
    N = cl.Acl.shape[0]
    prob = SdpProblem("hinf-of-lift")
    P = prob.symmetric("P", N)
    t = prob.scalar("t")
    nd, nz = cl.Bcl.shape[1], cl.Ccl.shape[0]
    prob.add_lmi(
        bmat(
            [
                [cl.Acl.T @ P + P @ cl.Acl, P @ cl.Bcl, cl.Ccl.T],
                [cl.Bcl.T @ P, -gamma * np.eye(nd), cl.Dcl.T],
                [cl.Ccl, cl.Dcl, -gamma * np.eye(nz)],
            ]
        ),
        sense="nsd",
        name="bounded-real",
    )
    prob.add_lmi(P - t * np.eye(N), name="min-eig")
    prob.add_lmi(bmat([[TRACE_CAP - cp.trace(P)]]), name="cap")
    prob.maximize(t)
    sol = solve_with_config(prob, solver_cfg)
    if sol.status in (SdpStatus.INFEASIBLE, SdpStatus.UNBOUNDED):
        return None
    if not sol.usable:
        raise SolverFailure("H-infinity lift returned {}".format(sol.status), str(sol.status))
    Pv = sym(np.atleast_2d(sol.values["P"]))
    if sol.values["t"] <= 0 or nsd_violation(hinf_of_lifted_matrix(plant, K, gamma, Pv)) > lmi_tol:
        logger.debug("H-infinity lift at gamma={:.8g} failed the recheck".format(gamma))
        return None
    margin = p12_margin(Pv, plant.n)
    if margin < p12_margin_tol:
        logger.info(
            "H-infinity lift at gamma={:.8g}: P12 margin {:.3e} below {:.1e}".format(gamma, margin, p12_margin_tol)
        )
        return None
    return Pv


def hinf_of_lift(
    plant: OutputPlant, K: DynamicPolicy, gamma: float, solver_cfg=None, **kwargs
) -> HinfOfLiftedPoint:
    cost = hinf_of_cost(plant, K)
    if gamma < cost * (1.0 - 1e-8):
        raise NotInEpigraphError("gamma={:.10g} is below the H-infinity cost {:.10g}".format(gamma, cost))
    P = hinf_of_lift_feasibility(plant, K, gamma, solver_cfg=solver_cfg, **kwargs)
    if P is None:
        raise DegeneratePointError("no certificate with invertible P12 at gamma={:.10g}".format(gamma))
    return HinfOfLiftedPoint(K=K, gamma=float(gamma), P=P)


# convex set


def _m_blocks(plant: OutputPlant, gamma, G, F, H, M, X, Y):
    A, B1, B2, C1, C2 = plant.A, plant.B1, plant.B2, plant.C1, plant.C2
    D12, D21 = plant.D12, plant.D21
    nd, nz = B1.shape[1], C1.shape[0]
    AX = A @ X + B2 @ F
    YA = Y @ A + H @ C2
    A12 = M.T + A + B2 @ G @ C2
    B1c = B1 + B2 @ G @ D21
    YB = Y @ B1 + H @ D21
    C1X = C1 @ X + D12 @ F
    C1c = C1 + D12 @ G @ C2
    Dc = D12 @ G @ D21
    return [
        [AX + AX.T, A12, B1c, C1X.T],
        [A12.T, YA + YA.T, YB, C1c.T],
        [B1c.T, YB.T, -gamma * np.eye(nd), Dc.T],
        [C1X, C1c, Dc, -gamma * np.eye(nz)],
    ]


def hinf_of_m_operator(plant: OutputPlant, gamma: float, Lam, X, Y) -> np.ndarray:
    G, F, H, M = unpack_lambda(Lam, plant.n, plant.m, plant.p)
    return np.block(_m_blocks(plant, gamma, G, F, H, M, np.asarray(X, dtype=float), np.asarray(Y, dtype=float)))


def hinf_of_is_convex_member(plant: OutputPlant, cp_: HinfOfConvexPoint, tol: float = LMI_TOL) -> bool:
    try:
        check_xy(cp_.X, cp_.Y)
    except DegeneratePointError:
        return False
    return nsd_violation(hinf_of_m_operator(plant, cp_.gamma, cp_.Lam, cp_.X, cp_.Y)) <= tol


def phi_hinf_of(plant: OutputPlant, pt: HinfOfLiftedPoint) -> Tuple[HinfOfConvexPoint, AuxGl]:
    Lam, X, Y, Xi = phi_lambda(plant, pt.K, pt.P)
    return HinfOfConvexPoint(gamma=pt.gamma, Lam=Lam, X=X, Y=Y), AuxGl(Xi=Xi)


def psi_hinf_of(plant: OutputPlant, cp_: HinfOfConvexPoint, aux: AuxGl) -> HinfOfLiftedPoint:
    K = psi_k(plant, cp_.Lam, cp_.X, cp_.Y, aux.Xi)
    return HinfOfLiftedPoint(K=K, gamma=cp_.gamma, P=psi_p(cp_.X, cp_.Y, aux.Xi))


# synthesis


def _declare(prob: SdpProblem, plant: OutputPlant):
    n, m, p = plant.n, plant.m, plant.p
    G = prob.matrix("G", m, p)
    F = prob.matrix("F", m, n)
    H = prob.matrix("H", n, p)
    M = prob.matrix("M", n, n)
    X = prob.symmetric("X", n)
    Y = prob.symmetric("Y", n)
    return G, F, H, M, X, Y


def hinf_of_sdp(plant: OutputPlant) -> SdpProblem:
    n = plant.n
    prob = SdpProblem("hinf-of")
    gamma = prob.scalar("gamma")
    G, F, H, M, X, Y = _declare(prob, plant)
    prob.add_lmi(bmat(_m_blocks(plant, gamma, G, F, H, M, X, Y)), sense="nsd", name="M")
    prob.add_lmi(bmat([[X, np.eye(n)], [np.eye(n), Y]]), strict=True, name="XY")
    prob.minimize(gamma)
    return prob


def _recovery_sdp(plant: OutputPlant, level: float, cap: float) -> SdpProblem:
    """Most interior point of the convex set at a fixed level, with bounded X and Y."""
    n = plant.n
    prob = SdpProblem("hinf-of-recovery")
    t = prob.scalar("t")
    G, F, H, M, X, Y = _declare(prob, plant)
    blocks = bmat(_m_blocks(plant, level, G, F, H, M, X, Y))
    k = blocks.shape[0]
    prob.add_lmi(blocks + t * np.eye(k), sense="nsd", name="M")
    prob.add_lmi(bmat([[X, np.eye(n)], [np.eye(n), Y]]) - t * np.eye(2 * n), name="XY")
    prob.add_lmi(bmat([[cap - cp.trace(X) - cp.trace(Y)]]), name="cap")
    prob.add_lmi(bmat([[1.0 - t]]), name="t")
    prob.maximize(t)
    return prob


def _convex_point(sol: SdpSolution, plant: OutputPlant, gamma: float) -> HinfOfConvexPoint:
    n, m, p = plant.n, plant.m, plant.p
    Lam = np.block(
        [
            [np.atleast_2d(sol.values["G"]).reshape(m, p), np.atleast_2d(sol.values["F"]).reshape(m, n)],
            [np.atleast_2d(sol.values["H"]).reshape(n, p), np.atleast_2d(sol.values["M"]).reshape(n, n)],
        ]
    )
    return HinfOfConvexPoint(
        gamma=gamma,
        Lam=Lam,
        X=sym(np.atleast_2d(sol.values["X"])),
        Y=sym(np.atleast_2d(sol.values["Y"])),
    )


def hinf_of_solve(plant: OutputPlant, solver_cfg=None) -> HinfOfSolution:
    """Solve for the optimal level, then recover a policy from the most interior
    point at ``gamma* (1 + recovery_backoff)`` with ``Xi = I``."""
    sol = solve_with_config(hinf_of_sdp(plant), solver_cfg)
    if not sol.usable:
        raise SolverFailure("H-infinity SDP returned {}".format(sol.status), str(sol.status))
    gamma = float(sol.values["gamma"])
    point = _convex_point(sol, plant, gamma)

    backoff = config_get(solver_cfg, "recovery_backoff", RECOVERY_BACKOFF)
    cap = config_get(solver_cfg, "recovery_cap", RECOVERY_CAP)
    level = gamma * (1.0 + backoff)
    rec = solve_with_config(_recovery_sdp(plant, level, cap), solver_cfg)
    K = None
    if rec.usable and rec.values["t"] > 0:
        rpoint = _convex_point(rec, plant, level)
        try:
            K = psi_k(plant, rpoint.Lam, rpoint.X, rpoint.Y, np.eye(plant.n))
        except DegeneratePointError as e:
            logger.warning("H-infinity policy recovery failed: {}".format(e))
    else:
        logger.warning("H-infinity recovery SDP at level {:.8g} returned {}".format(level, rec.status))
    logger.debug("H-infinity SDP: {} gamma={:.10g}, recovered at {:.10g}".format(sol.status, gamma, level))
    return HinfOfSolution(
        status=sol.status,
        gamma=gamma,
        K=K,
        level=level if K is not None else None,
        point=point,
        sdp=sol,
    )

"""
LQG over full-order strictly proper dynamic policies.

The cost is the (unsquared) H2 norm of the closed loop from ``d = (w, v)`` to
``z = (Q^1/2 x, R^1/2 u)``. The lifted set pairs a policy with an H2
certificate ``(P, Gamma)`` whose P12 block is invertible; ``phi_lqg`` maps it
onto the convex set of ``(gamma, Lambda, X, Y, Gamma)`` times GL_n.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import cvxpy as cp
import numpy as np
import scipy.linalg as la

from ecl_control.conic import SdpProblem, SdpSolution, SdpStatus, bmat, solve_with_config
from ecl_control.errors import (
    DegeneratePointError,
    NotHurwitzError,
    NotInEpigraphError,
    PreconditionError,
    SolverFailure,
)
from ecl_control.linalg import is_hurwitz, min_eig, solve_lyapunov_ct, solve_riccati_ct, sym
from ecl_control.norms import (
    h2_certificate_violation,
    h2_lmi_blocks,
    h2_lmi_certificate,
    nsd_violation,
    psd_violation,
)
from ecl_control.plant import ClosedLoop, DynamicPolicy, OutputPlant, assemble_closed_loop
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

LMI_TOL = 1e-7
TRACE_CAP = 1e6


@dataclass(frozen=True, eq=False)
class LqgLiftedPoint:
    K: DynamicPolicy
    gamma: float
    P: np.ndarray
    Gamma: np.ndarray


@dataclass(frozen=True, eq=False)
class LqgConvexPoint:
    gamma: float
    Lam: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Gamma: np.ndarray


@dataclass(frozen=True, eq=False)
class LqgSolution:
    status: SdpStatus
    gamma: float
    K: Optional[DynamicPolicy]
    point: Optional[LqgConvexPoint]
    sdp: Optional[SdpSolution] = None


def _stable_loop(plant: OutputPlant, K: DynamicPolicy) -> ClosedLoop:
    if not K.strictly_proper:
        raise PreconditionError("LQG policies must be strictly proper (DK = 0)")
    cl = assemble_closed_loop(plant, K)
    if not is_hurwitz(cl.Acl):
        raise NotHurwitzError("policy is not internally stabilizing: the LQG cost is infinite")
    return cl


def lqg_gramians(plant: OutputPlant, K: DynamicPolicy) -> Tuple[ClosedLoop, np.ndarray, np.ndarray]:
    """Closed loop with its controllability and observability Gramians."""
    cl = _stable_loop(plant, K)
    Xc = solve_lyapunov_ct(cl.Acl, cl.Bcl @ cl.Bcl.T)
    Yo = solve_lyapunov_ct(cl.Acl.T, cl.Ccl.T @ cl.Ccl)
    return cl, Xc, Yo


def lqg_cost(plant: OutputPlant, K: DynamicPolicy) -> float:
    cl, Xc, Yo = lqg_gramians(plant, K)
    primal = float(np.trace(cl.Ccl @ Xc @ cl.Ccl.T))
    dual = float(np.trace(cl.Bcl.T @ Yo @ cl.Bcl))
    if abs(primal - dual) > 1e-8 * max(1.0, abs(primal)):
        logger.warning("LQG Gramian formulas disagree: {:.12g} vs {:.12g}".format(primal, dual))
    return float(np.sqrt(max(primal, 0.0)))


def lqg_grad(plant: OutputPlant, K: DynamicPolicy) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partial derivatives of the unsquared cost with respect to (AK, BK, CK)."""
    n = plant.n
    cl, Xc, Yo = lqg_gramians(plant, K)
    J = float(np.sqrt(max(np.trace(cl.Ccl @ Xc @ cl.Ccl.T), 0.0)))
    if J <= 0:
        raise PreconditionError("gradient of a zero LQG cost is not defined")
    YX = Yo @ Xc
    dA = YX[n:, n:]
    dB = YX[n:, :n] @ plant.C2.T + (Yo @ cl.Bcl)[n:] @ plant.D21.T
    dC = plant.B2.T @ YX[:n, n:] + plant.D12.T @ (cl.Ccl @ Xc)[:, n:]
    return dA / J, dB / J, dC / J


def lqg_riccati_optimum(plant: OutputPlant) -> Tuple[float, DynamicPolicy]:
    """Separation principle: Kalman filter plus LQR gain.

    Returns the optimal cost and the observer-based policy
    ``AK = A - B2 Kc - L C2``, ``BK = L``, ``CK = -Kc``.
    """
    A, B2, C2 = plant.A, plant.B2, plant.C2
    Pc = solve_riccati_ct(A, B2, plant.Q, plant.R)
    Sigma = solve_riccati_ct(A.T, C2.T, plant.W, plant.V)
    Kc = la.solve(plant.R, B2.T @ Pc, assume_a="pos")
    L = Sigma @ C2.T @ la.inv(plant.V)
    cost_sq = float(np.trace(Pc @ plant.W) + np.trace(Sigma @ Pc @ B2 @ Kc))
    K = DynamicPolicy(
        DK=np.zeros((plant.m, plant.p)), CK=-Kc, BK=L, AK=A - B2 @ Kc - L @ C2
    )
    return float(np.sqrt(cost_sq)), K


# lifted set


def lqg_lifted_blocks(plant: OutputPlant, K: DynamicPolicy, gamma: float, P, Gamma):
    cl = assemble_closed_loop(plant, K)
    return h2_lmi_blocks(cl.Acl, cl.Bcl, cl.Ccl, gamma, P, Gamma)


def lqg_is_lifted(
    plant: OutputPlant, pt: LqgLiftedPoint, tol: float = LMI_TOL, margin: float = P12_MARGIN
) -> bool:
    cl = assemble_closed_loop(plant, pt.K)
    if min_eig(pt.P) <= 0 or p12_margin(pt.P, plant.n) < margin:
        return False
    return h2_certificate_violation(cl.Acl, cl.Bcl, cl.Ccl, pt.gamma, pt.P, pt.Gamma) <= tol


def _lift_sdp(cl: ClosedLoop, gamma: float, solver_cfg=None):
    """Certificate maximizing the smallest eigenvalue of P."""
    N, nd, nz = cl.Acl.shape[0], cl.Bcl.shape[1], cl.Ccl.shape[0]
    prob = SdpProblem("lqg-lift")
    P = prob.symmetric("P", N)
    Gamma = prob.symmetric("Gamma", nz)
    t = prob.scalar("t")
    A, B, C = cl.Acl, cl.Bcl, cl.Ccl
    prob.add_lmi(bmat([[A.T @ P + P @ A, P @ B], [B.T @ P, -gamma * np.eye(nd)]]), sense="nsd", name="h2")
    prob.add_lmi(bmat([[P, C.T], [C, Gamma]]), name="output")
    prob.add_lmi(bmat([[gamma - cp.trace(Gamma)]]), name="trace")
    prob.add_lmi(P - t * np.eye(N), name="min-eig")
    prob.add_lmi(bmat([[TRACE_CAP - cp.trace(P)]]), name="cap")
    prob.maximize(t)
    sol = solve_with_config(prob, solver_cfg)
    if sol.status in (SdpStatus.INFEASIBLE, SdpStatus.UNBOUNDED):
        return None
    if not sol.usable:
        raise SolverFailure("LQG lift returned {}".format(sol.status), str(sol.status))
    if sol.values["t"] <= 0:
        return None
    return sym(sol.values["P"]), sym(np.atleast_2d(sol.values["Gamma"]))


def lqg_lift_feasibility(
    plant: OutputPlant,
    K: DynamicPolicy,
    gamma: float,
    p12_margin_tol: float = P12_MARGIN,
    lmi_tol: float = LMI_TOL,
    solver_cfg=None,
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """A certificate ``(P, Gamma)`` with P > 0 and P12 invertible, or None.

    The Gramian certificate ``P = gamma L_c^-1`` is tried first; the SDP
    maximizing the smallest eigenvalue of P is the fallback. None means the
    policy could not be certified at ``gamma`` (possibly degenerate), not
    that it is degenerate.
    """
    n = plant.n
    cl = _stable_loop(plant, K)
    if gamma < lqg_cost(plant, K) * (1.0 - 1e-8):
        return None

    cert = h2_lmi_certificate(cl.Acl, cl.Bcl, cl.Ccl, gamma, lmi_tol=lmi_tol, solver_cfg=solver_cfg)
    if cert is not None and min_eig(cert[0]) > 0 and p12_margin(cert[0], n) >= p12_margin_tol:
        return cert
    if cert is not None:
        logger.debug("H2 certificate has P12 margin {:.3e}; retrying".format(p12_margin(cert[0], n)))

    cert = _lift_sdp(cl, gamma, solver_cfg)
    if cert is None:
        return None
    P, Gamma = cert
    if h2_certificate_violation(cl.Acl, cl.Bcl, cl.Ccl, gamma, P, Gamma) > lmi_tol:
        logger.debug("LQG lift at gamma={:.8g} failed the recheck".format(gamma))
        return None
    margin = p12_margin(P, n)
    if margin < p12_margin_tol:
        logger.info("LQG lift at gamma={:.8g}: P12 margin {:.3e} below {:.1e}".format(gamma, margin, p12_margin_tol))
        return None
    return P, Gamma


def lqg_lift(plant: OutputPlant, K: DynamicPolicy, gamma: float, solver_cfg=None, **kwargs) -> LqgLiftedPoint:
    cost = lqg_cost(plant, K)
    if gamma < cost * (1.0 - 1e-8):
        raise NotInEpigraphError("gamma={:.10g} is below the LQG cost {:.10g}".format(gamma, cost))
    cert = lqg_lift_feasibility(plant, K, gamma, solver_cfg=solver_cfg, **kwargs)
    if cert is None:
        raise DegeneratePointError("no certificate with invertible P12 at gamma={:.10g}".format(gamma))
    return LqgLiftedPoint(K=K, gamma=float(gamma), P=cert[0], Gamma=cert[1])


# convex set


def _a_blocks(plant: OutputPlant, gamma, F, H, M, X, Y):
    A, B1, B2, C2, D21 = plant.A, plant.B1, plant.B2, plant.C2, plant.D21
    nd = B1.shape[1]
    AX = A @ X + B2 @ F
    YA = Y @ A + H @ C2
    YB = Y @ B1 + H @ D21
    return [
        [AX + AX.T, M.T + A, B1],
        [M + A.T, YA + YA.T, YB],
        [B1.T, YB.T, -gamma * np.eye(nd)],
    ]


def _b_blocks(plant: OutputPlant, F, X, Y, Gamma):
    n = plant.n
    CX = plant.C1 @ X + plant.D12 @ F
    return [
        [X, np.eye(n), CX.T],
        [np.eye(n), Y, plant.C1.T],
        [CX, plant.C1, Gamma],
    ]


def lqg_convex_blocks(plant: OutputPlant, cp_: LqgConvexPoint):
    """``(A_op, B_op)``: the first must be NSD, the second PSD."""
    G, F, H, M = unpack_lambda(cp_.Lam, plant.n, plant.m, plant.p)
    return (
        np.block(_a_blocks(plant, cp_.gamma, F, H, M, cp_.X, cp_.Y)),
        np.block(_b_blocks(plant, F, cp_.X, cp_.Y, cp_.Gamma)),
    )


def lqg_is_convex_member(plant: OutputPlant, cp_: LqgConvexPoint, tol: float = LMI_TOL) -> bool:
    G, *_ = unpack_lambda(cp_.Lam, plant.n, plant.m, plant.p)
    if np.any(G):
        return False
    try:
        check_xy(cp_.X, cp_.Y)
    except DegeneratePointError:
        return False
    first, second = lqg_convex_blocks(plant, cp_)
    trace_gap = max(0.0, float(np.trace(cp_.Gamma)) - cp_.gamma) / (1.0 + abs(cp_.gamma))
    return max(nsd_violation(first), psd_violation(second), trace_gap) <= tol


def phi_lqg(plant: OutputPlant, pt: LqgLiftedPoint) -> Tuple[LqgConvexPoint, AuxGl]:
    Lam, X, Y, Xi = phi_lambda(plant, pt.K, pt.P)
    Lam[: plant.m, : plant.p] = 0.0
    return LqgConvexPoint(gamma=pt.gamma, Lam=Lam, X=X, Y=Y, Gamma=pt.Gamma.copy()), AuxGl(Xi=Xi)


def psi_lqg(plant: OutputPlant, cp_: LqgConvexPoint, aux: AuxGl) -> LqgLiftedPoint:
    K = psi_k(plant, cp_.Lam, cp_.X, cp_.Y, aux.Xi)
    return LqgLiftedPoint(K=K, gamma=cp_.gamma, P=psi_p(cp_.X, cp_.Y, aux.Xi), Gamma=cp_.Gamma.copy())


# synthesis


def lqg_sdp(plant: OutputPlant) -> SdpProblem:
    plant.check_assumptions()
    n, m, p = plant.n, plant.m, plant.p
    prob = SdpProblem("lqg")
    gamma = prob.scalar("gamma")
    F = prob.matrix("F", m, n)
    H = prob.matrix("H", n, p)
    M = prob.matrix("M", n, n)
    X = prob.symmetric("X", n)
    Y = prob.symmetric("Y", n)
    Gamma = prob.symmetric("Gamma", n + m)
    prob.add_lmi(bmat(_a_blocks(plant, gamma, F, H, M, X, Y)), sense="nsd", name="A")
    prob.add_lmi(bmat(_b_blocks(plant, F, X, Y, Gamma)), name="B")
    prob.add_lmi(bmat([[X, np.eye(n)], [np.eye(n), Y]]), strict=True, name="XY")
    prob.add_lmi(bmat([[gamma - cp.trace(Gamma)]]), name="trace")
    prob.minimize(gamma)
    return prob


def lqg_solve(plant: OutputPlant, solver_cfg=None) -> LqgSolution:
    """Solve the convex problem and recover a policy with ``Xi = I``."""
    n, m, p = plant.n, plant.m, plant.p
    sol = solve_with_config(lqg_sdp(plant), solver_cfg)
    if not sol.usable:
        raise SolverFailure("LQG SDP returned {}".format(sol.status), str(sol.status))
    F = np.atleast_2d(sol.values["F"]).reshape(m, n)
    H = np.atleast_2d(sol.values["H"]).reshape(n, p)
    M = np.atleast_2d(sol.values["M"]).reshape(n, n)
    Lam = np.block([[np.zeros((m, p)), F], [H, M]])
    point = LqgConvexPoint(
        gamma=float(sol.values["gamma"]),
        Lam=Lam,
        X=sym(np.atleast_2d(sol.values["X"])),
        Y=sym(np.atleast_2d(sol.values["Y"])),
        Gamma=sym(np.atleast_2d(sol.values["Gamma"])),
    )
    try:
        K = psi_k(plant, Lam, point.X, point.Y, np.eye(n))
    except DegeneratePointError as e:
        logger.warning("LQG policy recovery failed: {}".format(e))
        K = None
    if sol.status == SdpStatus.NEAR_BOUNDARY:
        logger.info("LQG SDP optimum {:.8g} sits on the boundary".format(sol.objective))
    return LqgSolution(status=sol.status, gamma=point.gamma, K=K, point=point, sdp=sol)


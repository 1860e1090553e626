"""
LMI certificates for the H2 and H-infinity norms of a fixed realization.

Both return ``None`` when the LMI system is infeasible at the requested level
and raise :class:`~ecl_control.errors.SolverFailure` when the conic solver
cannot decide. Returned certificates are re-checked numerically against
``lmi_tol`` before they are handed out.
"""

import logging
from typing import Optional, Tuple

import cvxpy as cp
import numpy as np
import scipy.linalg as la

from ecl_control.conic import SdpProblem, SdpStatus, bmat, solve_with_config
from ecl_control.dataclass.utils import config_get
from ecl_control.errors import SolverFailure
from ecl_control.linalg import as_matrix, check_square, is_controllable, is_hurwitz, sym
from ecl_control.norms.h2 import controllability_gramian

logger = logging.getLogger(__name__)

LMI_TOL = 1e-7
STRICT_CAP = 1e6


def nsd_violation(M: np.ndarray) -> float:
    """Relative amount by which ``M`` fails to be negative semidefinite."""
    M = sym(np.atleast_2d(M))
    if M.size == 0:
        return 0.0
    return max(0.0, float(np.linalg.eigvalsh(M)[-1])) / (1.0 + float(np.linalg.norm(M, 2)))


def psd_violation(M: np.ndarray) -> float:
    return nsd_violation(-np.atleast_2d(M))


def h2_lmi_blocks(A, B, C, gamma, P, Gamma):
    """The two matrices of the H2 LMI system: the first must be NSD, the second PSD."""
    m = B.shape[1]
    first = np.block([[A.T @ P + P @ A, P @ B], [B.T @ P, -gamma * np.eye(m)]])
    second = np.block([[P, C.T], [C, Gamma]])
    return first, second


def h2_certificate_violation(A, B, C, gamma, P, Gamma) -> float:
    first, second = h2_lmi_blocks(A, B, C, gamma, P, Gamma)
    trace_gap = max(0.0, float(np.trace(Gamma)) - gamma) / (1.0 + abs(gamma))
    return max(nsd_violation(first), psd_violation(second), psd_violation(P), trace_gap)


def bounded_real_matrix(A, B, C, D, gamma, P) -> np.ndarray:
    m, p = B.shape[1], C.shape[0]
    return np.block(
        [
            [A.T @ P + P @ A, P @ B, C.T],
            [B.T @ P, -gamma * np.eye(m), D.T],
            [C, D, -gamma * np.eye(p)],
        ]
    )


def _analytic_h2(A, B, C, gamma):
    if not is_hurwitz(A) or not is_controllable(A, B):
        return None
    Lc = controllability_gramian(A, B)
    P = gamma * sym(la.inv(Lc))
    Gamma = sym(C @ Lc @ C.T) / gamma
    return P, Gamma


def h2_lmi_certificate(
    A, B, C, gamma: float, strict: bool = False, lmi_tol: float = LMI_TOL, solver_cfg=None
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Find (P, Gamma) certifying ``||C (sI - A)^-1 B||_2 <= gamma`` (``<`` when strict).

    The non-strict system is first tried with the Gramian construction
    ``P = gamma L_c^-1``, ``Gamma = C L_c C^T / gamma``; the SDP is the fallback.
    """
    A = check_square(A, "A")
    B, C = as_matrix(B, "B"), as_matrix(C, "C")
    n, m, p = A.shape[0], B.shape[1], C.shape[0]
    if gamma <= 0:
        return None

    if not strict and gamma > 0:
        cert = _analytic_h2(A, B, C, gamma)
        if cert is not None and h2_certificate_violation(A, B, C, gamma, *cert) <= lmi_tol:
            return cert
        if cert is not None:
            logger.info("Gramian H2 certificate rejected at gamma={:.6g}; solving the SDP".format(gamma))

    prob = SdpProblem("h2-certificate")
    P = prob.symmetric("P", n)
    Gamma = prob.symmetric("Gamma", p)
    if strict:
        t = prob.scalar("t")
        prob.add_lmi(bmat([[A.T @ P + P @ A, P @ B], [B.T @ P, -gamma * np.eye(m)]]) + t * np.eye(n + m), sense="nsd")
        prob.add_lmi(bmat([[P, C.T], [C, Gamma]]) - t * np.eye(n + p))
        prob.add_lmi(bmat([[gamma - cp.trace(Gamma) - t]]))
        prob.add_lmi(bmat([[1 - t]]))
        prob.add_lmi(bmat([[STRICT_CAP - cp.trace(P)]]))
        prob.maximize(t)
    else:
        prob.add_lmi(bmat([[A.T @ P + P @ A, P @ B], [B.T @ P, -gamma * np.eye(m)]]), sense="nsd")
        prob.add_lmi(bmat([[P, C.T], [C, Gamma]]))
        prob.add_lmi(P, strict=True)
        prob.add_lmi(bmat([[gamma - cp.trace(Gamma)]]))
        prob.minimize(cp.trace(P))
    sol = solve_with_config(prob, solver_cfg)
    if sol.status in (SdpStatus.INFEASIBLE, SdpStatus.UNBOUNDED):
        return None
    if not sol.usable:
        raise SolverFailure("H2 certificate solve failed: {}".format(sol.status), str(sol.status))
    if strict and sol.values["t"] <= config_get(solver_cfg, "feas_tol", 1e-8) * 10:
        return None
    Pv, Gv = sym(sol.values["P"]), sym(sol.values["Gamma"])
    if h2_certificate_violation(A, B, C, gamma, Pv, Gv) > lmi_tol:
        logger.debug("H2 certificate at gamma={:.6g} failed the recheck".format(gamma))
        return None
    return Pv, Gv


def bounded_real_certificate(
    A, B, C, D, gamma: float, strict: bool = False, lmi_tol: float = LMI_TOL, solver_cfg=None
) -> Optional[np.ndarray]:
    """Find P for the bounded real LMI at level ``gamma``.

    Strict: P > 0 and the LMI < 0, decided by maximizing a common margin t.
    Non-strict: the LMI <= 0 with P symmetric, choosing the minimum-trace P.
    """
    A = check_square(A, "A")
    B, C, D = as_matrix(B, "B"), as_matrix(C, "C"), as_matrix(D, "D")
    n, m, p = A.shape[0], B.shape[1], C.shape[0]
    if gamma <= 0:
        return None

    prob = SdpProblem("bounded-real")
    P = prob.symmetric("P", n)
    lmi = bmat(
        [
            [A.T @ P + P @ A, P @ B, C.T],
            [B.T @ P, -gamma * np.eye(m), D.T],
            [C, D, -gamma * np.eye(p)],
        ]
    )
    if strict:
        t = prob.scalar("t")
        prob.add_lmi(lmi + t * np.eye(n + m + p), sense="nsd")
        prob.add_lmi(P - t * np.eye(n))
        prob.add_lmi(bmat([[1 - t]]))
        prob.add_lmi(bmat([[STRICT_CAP - cp.trace(P)]]))
        prob.maximize(t)
    else:
        prob.add_lmi(lmi, sense="nsd")
        prob.add_lmi(P)
        prob.minimize(cp.trace(P))
    sol = solve_with_config(prob, solver_cfg)
    if sol.status in (SdpStatus.INFEASIBLE, SdpStatus.UNBOUNDED):
        return None
    if not sol.usable:
        raise SolverFailure("bounded real solve failed: {}".format(sol.status), str(sol.status))
    if strict and sol.values["t"] <= config_get(solver_cfg, "feas_tol", 1e-8) * 10:
        return None
    Pv = sym(sol.values["P"])
    if nsd_violation(bounded_real_matrix(A, B, C, D, gamma, Pv)) > lmi_tol:
        logger.debug("bounded real certificate at gamma={:.6g} failed the recheck".format(gamma))
        return None
    return Pv


"""
Change of variables shared by the LQG and output-feedback H-infinity lifts.

A lifted point carries a full-order policy K and a Lyapunov matrix
``P = [[P11, P12], [P12^T, P22]]`` with ``P12`` invertible. With
``X = (P^-1)_11``, ``Y = P11`` and ``Xi = P12`` the policy is mapped to

    Lambda = [[DK,                     DK C2 X + CK (P^-1)_21],
              [P11 B2 DK + P12 BK,     M                     ]]

which enters the closed-loop LMIs affinely. ``psi_k`` / ``psi_p`` invert the
map for any ``Xi`` in GL_n.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DegeneratePointError, DimensionError
from ecl_control.linalg import min_eig, sym
from ecl_control.plant import DynamicPolicy, OutputPlant

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
P12_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class AuxGl:
    """Coordinate on GL_n (the P12 block) capturing controller similarity."""

    Xi: np.ndarray

    @property
    def margin(self) -> float:
        return float(la.svdvals(self.Xi)[-1])


def split(P: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    P = np.asarray(P, dtype=float)
    if P.shape != (2 * n, 2 * n):
        raise DimensionError("P must be {0}x{0}, got {1}".format(2 * n, P.shape))
    return P[:n, :n], P[:n, n:], P[n:, n:]


def p12_margin(P: np.ndarray, n: int) -> float:
    """Smallest singular value of P12 relative to ``||P||_2``."""
    _, P12, _ = split(P, n)
    return float(la.svdvals(P12)[-1]) / max(float(la.norm(P, 2)), SINGULAR_TOL)


def _inverse_blocks(P: np.ndarray, n: int):
    if min_eig(P) <= SINGULAR_TOL * max(1.0, float(np.abs(P).max())):
        raise DegeneratePointError("P is not positive definite")
    Pinv = sym(la.inv(P))
    return Pinv[:n, :n], Pinv[n:, :n]


def _check_xi(P12: np.ndarray) -> None:
    s = la.svdvals(P12)
    if s[-1] <= SINGULAR_TOL * max(1.0, s[0]):
        raise DegeneratePointError("P12 is singular (smallest singular value {:.3e})".format(s[-1]))


def phi_m(plant: OutputPlant, K: DynamicPolicy, P: np.ndarray) -> np.ndarray:
    n = plant.n
    P11, P12, _ = split(P, n)
    _check_xi(P12)
    X, Pi = _inverse_blocks(P, n)
    A, B2, C2 = plant.A, plant.B2, plant.C2
    return (
        P12 @ K.BK @ C2 @ X
        + P11 @ B2 @ K.CK @ Pi
        + P11 @ (A + B2 @ K.DK @ C2) @ X
        + P12 @ K.AK @ Pi
    )


def phi_lambda(plant: OutputPlant, K: DynamicPolicy, P: np.ndarray):
    """Returns ``(Lambda, X, Y, Xi)``."""
    n = plant.n
    if K.order != n:
        raise DimensionError("only full-order policies are lifted (order {} != {})".format(K.order, n))
    P11, P12, _ = split(P, n)
    X, Pi = _inverse_blocks(P, n)
    B2, C2 = plant.B2, plant.C2
    G = K.DK
    F = K.DK @ C2 @ X + K.CK @ Pi
    H = P11 @ B2 @ K.DK + P12 @ K.BK
    M = phi_m(plant, K, P)
    Lam = np.block([[G, F], [H, M]])
    return Lam, X, P11.copy(), P12.copy()


def unpack_lambda(Lam: np.ndarray, n: int, m: int, p: int):
    """``[[G, F], [H, M]]`` -> (G, F, H, M)."""
    Lam = np.asarray(Lam, dtype=float)
    if Lam.shape != (m + n, p + n):
        raise DimensionError("Lambda must be {}x{}, got {}".format(m + n, p + n, Lam.shape))
    return Lam[:m, :p], Lam[:m, p:], Lam[m:, :p], Lam[m:, p:]


def check_xy(X: np.ndarray, Y: np.ndarray, tol: float = SINGULAR_TOL) -> None:
    n = X.shape[0]
    XY = np.block([[X, np.eye(n)], [np.eye(n), Y]])
    if min_eig(XY) <= tol * max(1.0, float(np.abs(XY).max())):
        raise DegeneratePointError(
            "[[X, I], [I, Y]] is not positive definite (min eigenvalue {:.3e})".format(min_eig(XY))
        )


def _pi(X: np.ndarray, Y: np.ndarray, Xi: np.ndarray) -> np.ndarray:
    return -la.solve(Xi, (Y - la.inv(X)) @ X)


def psi_p(X, Y, Xi) -> np.ndarray:
    """``[[Y, Xi], [Xi^T, Xi^T (Y - X^-1)^-1 Xi]]``."""
    X, Y, Xi = (np.asarray(v, dtype=float) for v in (X, Y, Xi))
    check_xy(X, Y)
    _check_xi(Xi)
    S = Y - la.inv(X)
    return sym(np.block([[Y, Xi], [Xi.T, Xi.T @ la.solve(S, Xi)]]))


def psi_k(plant: OutputPlant, Lam, X, Y, Xi) -> DynamicPolicy:
    n, m, p = plant.n, plant.m, plant.p
    X, Y, Xi = (np.asarray(v, dtype=float) for v in (X, Y, Xi))
    check_xy(X, Y)
    _check_xi(Xi)
    G, F, H, M = unpack_lambda(Lam, n, m, p)
    A, B2, C2 = plant.A, plant.B2, plant.C2
    Pi = _pi(X, Y, Xi)
    Pi_inv = la.inv(Pi)
    DK = G
    CK = (F - G @ C2 @ X) @ Pi_inv
    BK = la.solve(Xi, H - Y @ B2 @ G)
    AK = la.solve(Xi, M - Y @ (A - B2 @ G @ C2) @ X - H @ C2 @ X - Y @ B2 @ F) @ Pi_inv
    return DynamicPolicy(DK=DK, CK=CK, BK=BK, AK=AK)


def congruence_T(P: np.ndarray, n: int) -> np.ndarray:
    """``T = [[(P^-1)_11, I], [(P^-1)_21, 0]]``; ``P T = [[I, P11], [0, P12^T]]``."""
    _, P12, _ = split(P, n)
    _check_xi(P12)
    X, Pi = _inverse_blocks(P, n)
    return np.block([[X, np.eye(n)], [Pi, np.zeros((n, n))]])


def congruence(M: np.ndarray, T: np.ndarray) -> np.ndarray:
    """``diag(T, I)^T M diag(T, I)`` with T acting on the leading block."""
    k = M.shape[0] - T.shape[0]
    D = la.block_diag(T, np.eye(k))
    return D.T @ M @ D

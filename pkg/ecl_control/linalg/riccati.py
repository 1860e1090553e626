import logging

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError, NotHurwitzError, RiccatiError
from ecl_control.linalg.lyapunov import solve_lyapunov_ct
from ecl_control.linalg.spectral import (
    EIG_TOL,
    as_matrix,
    check_square,
    is_hurwitz,
    min_eig,
    spectral_abscissa,
    sym,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-9
NEWTON_STEPS = 5


def riccati_residual(A, B, Q, R, P) -> float:
    """Relative residual of A^T P + P A + Q - P B R^-1 B^T P."""
    G = B @ la.solve(R, B.T, assume_a="pos")
    res = A.T @ P + P @ A + Q - P @ G @ P
    scale = 1.0 + np.linalg.norm(Q, "fro") + np.linalg.norm(A.T @ P, "fro") + np.linalg.norm(P @ G @ P, "fro")
    return float(np.linalg.norm(res, "fro") / scale)


def _newton_refine(A, B, Q, R, P, steps: int = NEWTON_STEPS):
    """Kleinman iterations started from P; stops when the residual stops improving."""
    best, best_res = P, riccati_residual(A, B, Q, R, P)
    for _ in range(steps):
        if best_res <= 1e-14:
            break
        K = la.solve(R, B.T @ best, assume_a="pos")
        Acl = A - B @ K
        if not is_hurwitz(Acl):
            break
        try:
            P_new = solve_lyapunov_ct(Acl.T, Q + K.T @ R @ K)
        except NotHurwitzError:
            break
        res = riccati_residual(A, B, Q, R, P_new)
        if res >= best_res:
            break
        best, best_res = sym(P_new), res
    return best, best_res


def solve_riccati_ct(A, B, Q, R, eig_tol: float = EIG_TOL) -> np.ndarray:
    """Stabilizing solution of ``A^T P + P A + Q - P B R^-1 B^T P = 0``.

    The stable invariant subspace of the Hamiltonian
    ``[[A, -B R^-1 B^T], [-Q, -A^T]]`` is selected by an ordered real Schur
    decomposition. If the ordering does not yield an n-dimensional stable
    subspace, the fallback is ``scipy.linalg.solve_continuous_are``. Either
    result is then polished by Newton (Kleinman) steps.

    Raises:
        RiccatiError: no stabilizing solution was found.
    """
    A = check_square(A, "A")
    n = A.shape[0]
    B = as_matrix(B, "B")
    Q = sym(check_square(Q, "Q"))
    R = sym(check_square(R, "R"))
    if B.shape[0] != n or Q.shape[0] != n or R.shape[0] != B.shape[1]:
        raise DimensionError(
            "incompatible Riccati data: A {}, B {}, Q {}, R {}".format(A.shape, B.shape, Q.shape, R.shape)
        )
    if min_eig(R) <= 0:
        raise DimensionError("R must be positive definite")
    if n == 0:
        return np.zeros((0, 0))

    G = B @ la.solve(R, B.T, assume_a="pos")
    H = np.block([[A, -G], [-Q, -A.T]])

    P = None
    _, Z, sdim = la.schur(H, output="real", sort="lhp")
    if sdim == n:
        U1, U2 = Z[:n, :n], Z[n:, :n]
        try:
            P = sym(la.solve(U1.T, U2.T).T)
        except la.LinAlgError:
            P = None
    else:
        logger.debug("hamiltonian stable subspace has dimension {} != {}".format(sdim, n))

    if P is None:
        logger.info("ordered Schur method failed, falling back to scipy.linalg.solve_continuous_are")
        try:
            P = sym(la.solve_continuous_are(A, B, Q, R))
        except (la.LinAlgError, ValueError) as e:
            raise RiccatiError(
                "stabilizing invariant subspace not found (stable dimension {} of {}): {}".format(sdim, n, e)
            ) from e

    P, res = _newton_refine(A, B, Q, R, P)
    K = la.solve(R, B.T @ P, assume_a="pos")
    if not is_hurwitz(A - B @ K, 0.0, eig_tol):
        raise RiccatiError(
            "Riccati solution is not stabilizing: closed-loop spectral abscissa {:.3e}".format(
                spectral_abscissa(A - B @ K)
            )
        )
    if res > RESIDUAL_TOL:
        logger.warning("Riccati relative residual {:.3e} above {:.0e}".format(res, RESIDUAL_TOL))
    logger.debug("riccati residual {:.3e}".format(res))
    return P


def lqr_gain(A, B, Q, R) -> np.ndarray:
    """Optimal state-feedback gain in the ``u = K x`` convention, K = -R^-1 B^T P*."""
    P = solve_riccati_ct(A, B, Q, R)
    return -la.solve(np.atleast_2d(R), np.atleast_2d(B).T @ P, assume_a="pos")

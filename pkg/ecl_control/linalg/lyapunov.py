import logging

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError, NotHurwitzError
from ecl_control.linalg.spectral import EIG_TOL, check_square, is_hurwitz, spectral_abscissa, sym

logger = logging.getLogger(__name__)

KRONECKER_MAX_DIM = 30


def lyapunov_operator(A: np.ndarray) -> np.ndarray:
    """Matrix of X -> AX + XA^T acting on column-major vec(X)."""
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(eye, A) + np.kron(A, eye)


def solve_lyapunov_ct(
    A,
    Q,
    method: str = "kronecker",
    kronecker_max_dim: int = KRONECKER_MAX_DIM,
    check_stability: bool = True,
    eig_tol: float = EIG_TOL,
) -> np.ndarray:
    """Solve ``A X + X A^T + Q = 0`` for the unique X.

    Args:
        A: Hurwitz n x n matrix.
        Q: n x n symmetric right-hand side.
        method: ``"kronecker"`` (vectorized dense solve) or
            ``"bartels_stewart"``. Kronecker falls back to Bartels-Stewart
            above ``kronecker_max_dim``.
        check_stability: when False, only the uniqueness condition
            (no eigenvalue pair with lambda_i + lambda_j = 0) is required.

    Raises:
        NotHurwitzError: A is not Hurwitz (no unique solution).
    """
    A = check_square(A, "A")
    Q = check_square(Q, "Q")
    n = A.shape[0]
    if Q.shape[0] != n:
        raise DimensionError("Q must be {0}x{0}, got {1}".format(n, Q.shape))
    if n == 0:
        return np.zeros((0, 0))
    if check_stability and not is_hurwitz(A, 0.0, eig_tol):
        raise NotHurwitzError(
            "Lyapunov equation has no unique stabilizing solution: "
            "spectral abscissa {:.3e} >= 0".format(spectral_abscissa(A))
        )

    method = str(method)
    if method == "kronecker" and n > kronecker_max_dim:
        logger.info(
            "n={} exceeds kronecker_max_dim={}, using Bartels-Stewart".format(n, kronecker_max_dim)
        )
        method = "bartels_stewart"

    if method == "kronecker":
        L = lyapunov_operator(A)
        try:
            x = la.solve(L, -Q.reshape(-1, order="F"))
        except la.LinAlgError as e:
            raise NotHurwitzError("singular Lyapunov operator: {}".format(e)) from e
        X = x.reshape((n, n), order="F")
    elif method == "bartels_stewart":
        X = la.solve_continuous_lyapunov(A, -Q)
    else:
        raise ValueError("unknown Lyapunov method: {}".format(method))

    X = sym(X) if np.allclose(Q, Q.T) else X
    logger.debug(
        "lyapunov residual {:.3e}".format(lyapunov_residual(A, X, Q))
    )
    return X


def lyapunov_residual(A, X, Q) -> float:
    return float(np.linalg.norm(A @ X + X @ A.T + Q, "fro"))

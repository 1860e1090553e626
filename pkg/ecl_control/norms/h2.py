import logging

import numpy as np

from ecl_control.errors import DimensionError, NotHurwitzError
from ecl_control.linalg import as_matrix, check_square, is_hurwitz, solve_lyapunov_ct, sym

logger = logging.getLogger(__name__)


def _check_abc(A, B, C):
    A = check_square(A, "A")
    B = as_matrix(B, "B")
    C = as_matrix(C, "C")
    if B.shape[0] != A.shape[0] or C.shape[1] != A.shape[0]:
        raise DimensionError(
            "incompatible realization: A {}, B {}, C {}".format(A.shape, B.shape, C.shape)
        )
    if not is_hurwitz(A):
        raise NotHurwitzError("A is not Hurwitz: the H2 norm is infinite")
    return A, B, C


def controllability_gramian(A, B, **kwargs) -> np.ndarray:
    """L_c solving ``A L_c + L_c A^T + B B^T = 0``."""
    return solve_lyapunov_ct(A, B @ B.T, **kwargs)


def observability_gramian(A, C, **kwargs) -> np.ndarray:
    """L_o solving ``A^T L_o + L_o A + C^T C = 0``."""
    return solve_lyapunov_ct(A.T, C.T @ C, **kwargs)


def h2_norm_sq(A, B, C, **kwargs) -> float:
    """Squared H2 norm of ``C (sI - A)^-1 B``, i.e. ``tr(C L_c C^T)``."""
    A, B, C = _check_abc(A, B, C)
    if A.shape[0] == 0:
        return 0.0
    Lc = controllability_gramian(A, B, **kwargs)
    return max(0.0, float(np.trace(sym(C @ Lc @ C.T))))


def h2_norm_sq_dual(A, B, C, **kwargs) -> float:
    """Same quantity from the observability Gramian, ``tr(B^T L_o B)``."""
    A, B, C = _check_abc(A, B, C)
    if A.shape[0] == 0:
        return 0.0
    Lo = observability_gramian(A, C, **kwargs)
    return max(0.0, float(np.trace(sym(B.T @ Lo @ B))))


def h2_norm(A, B, C, **kwargs) -> float:
    return float(np.sqrt(h2_norm_sq(A, B, C, **kwargs)))

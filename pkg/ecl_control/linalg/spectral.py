"""
Eigenvalue-based tests on small dense matrices: stability, definiteness,
symmetric square roots and rank conditions.
"""

import logging
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError

logger = logging.getLogger(__name__)

EIG_TOL = 1e-10
PSD_CLIP = 1e-12


class Definiteness(Enum):
    PD = "PD"
    PSD = "PSD"
    INDEFINITE = "INDEFINITE"

    def __str__(self):
        return self.value


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D float array (scalars become 1x1)."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2:
        raise DimensionError("{} must be 2-D, got shape {}".format(name, M.shape))
    if not np.all(np.isfinite(M)):
        raise DimensionError("{} has non-finite entries".format(name))
    return M


def check_square(M, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionError("{} must be square, got shape {}".format(name, M.shape))
    return M


def sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def eig_real_parts(A) -> np.ndarray:
    A = check_square(A, "A")
    if A.shape[0] == 0:
        return np.zeros(0)
    return np.sort(np.real(la.eigvals(A)))


def spectral_abscissa(A) -> float:
    parts = eig_real_parts(A)
    return float(parts.max()) if parts.size else -np.inf


def is_hurwitz(A, margin: float = 0.0, eig_tol: float = EIG_TOL) -> bool:
    """True iff every eigenvalue of ``A`` has real part below ``-margin``.

    Eigenvalues within ``eig_tol`` of the threshold count as unstable.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    return spectral_abscissa(A) < -margin - eig_tol


def min_eig(M) -> float:
    M = check_square(M, "M")
    if M.shape[0] == 0:
        return np.inf
    return float(la.eigvalsh(sym(M))[0])


def schur_psd_check(M, tol: float = EIG_TOL) -> Definiteness:
    lam = min_eig(M)
    if lam > tol:
        return Definiteness.PD
    if lam >= -tol:
        return Definiteness.PSD
    return Definiteness.INDEFINITE


def psd_sqrt(M, clip: float = PSD_CLIP) -> np.ndarray:
    """Symmetric square root; eigenvalues below ``clip`` are treated as zero."""
    M = check_square(M, "M")
    if M.shape[0] == 0:
        return M.copy()
    lam, U = la.eigh(sym(M))
    lam = np.where(lam < clip, 0.0, lam)
    return sym((U * np.sqrt(lam)) @ U.T)


def ctrb_rank(A, B, tol: float = 1e-9) -> int:
    """Rank of the controllability matrix [B, AB, ..., A^{n-1}B]."""
    A = check_square(A, "A")
    B = as_matrix(B, "B")
    n = A.shape[0]
    blocks = [B]
    for _ in range(1, n):
        blocks.append(A @ blocks[-1])
    C = np.hstack(blocks)
    if C.size == 0:
        return 0
    s = la.svdvals(C)
    return int(np.sum(s > tol * max(1.0, s[0])))


def is_controllable(A, B, tol: float = 1e-9) -> bool:
    return ctrb_rank(A, B, tol) == np.shape(np.atleast_2d(A))[0]


def is_observable(C, A, tol: float = 1e-9) -> bool:
    return is_controllable(np.atleast_2d(A).T, np.atleast_2d(C).T, tol)


def block_diag(*blocks: Sequence[np.ndarray]) -> np.ndarray:
    return la.block_diag(*[np.atleast_2d(b) for b in blocks])

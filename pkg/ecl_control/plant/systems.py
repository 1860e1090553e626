"""
Problem data containers.

Matrices are stored as float ``numpy`` arrays; the containers are frozen so
they can be shared freely between workers.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Union

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError, PreconditionError
from ecl_control.linalg import (
    as_matrix,
    check_square,
    is_controllable,
    is_observable,
    min_eig,
    psd_sqrt,
    sym,
)

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12


def _freeze(obj, name: str, value: np.ndarray):
    value = np.array(value, dtype=float)
    value.setflags(write=False)
    object.__setattr__(obj, name, value)


def _check_weight(M: np.ndarray, name: str, definite: bool):
    if not np.allclose(M, M.T, atol=1e-12, rtol=1e-10):
        raise PreconditionError("{} must be symmetric".format(name))
    lam = min_eig(M)
    if definite and lam <= WEIGHT_TOL:
        raise PreconditionError(
            "{} must be positive definite (min eigenvalue {:.3e})".format(name, lam)
        )
    if not definite and lam < -1e-10 * max(1.0, np.abs(M).max(initial=0.0)):
        raise PreconditionError(
            "{} must be positive semidefinite (min eigenvalue {:.3e})".format(name, lam)
        )


@dataclass(frozen=True, eq=False)
class Plant:
    """State-feedback plant ``dx = Ax + Bu + Bw w`` with z = [Q^1/2 x; R^1/2 u]."""

    A: np.ndarray
    B: np.ndarray
    Bw: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        A = check_square(self.A, "A")
        n = A.shape[0]
        B = as_matrix(self.B, "B")
        Bw = as_matrix(self.Bw, "Bw")
        Q = check_square(self.Q, "Q")
        R = check_square(self.R, "R")
        if B.shape[0] != n:
            raise DimensionError("B must have {} rows, got {}".format(n, B.shape))
        if Bw.shape[0] != n:
            raise DimensionError("Bw must have {} rows, got {}".format(n, Bw.shape))
        if Q.shape[0] != n:
            raise DimensionError("Q must be {0}x{0}, got {1}".format(n, Q.shape))
        if R.shape[0] != B.shape[1]:
            raise DimensionError("R must be {0}x{0}, got {1}".format(B.shape[1], R.shape))
        _check_weight(Q, "Q", definite=False)
        _check_weight(R, "R", definite=True)
        for name, value in zip(("A", "B", "Bw", "Q", "R"), (A, B, Bw, sym(Q), sym(R))):
            _freeze(self, name, value)

    @classmethod
    def from_weights(cls, A, B, W, Q, R) -> "Plant":
        """Build from the noise weight ``W = Bw Bw^T`` (Bw = W^1/2)."""
        W = check_square(W, "W")
        _check_weight(W, "W", definite=False)
        return cls(A=A, B=B, Bw=psd_sqrt(W), Q=Q, R=R)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def nw(self) -> int:
        return self.Bw.shape[1]

    @property
    def W(self) -> np.ndarray:
        return sym(self.Bw @ self.Bw.T)

    @property
    def Q_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.Q)

    @property
    def R_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.R)

    @property
    def controllable(self) -> bool:
        return is_controllable(self.A, self.B)

    @property
    def bw_full_row_rank(self) -> bool:
        return np.linalg.matrix_rank(self.Bw) == self.n

    def flags(self) -> Dict[str, bool]:
        """Assumption flags recorded alongside results."""
        return {
            "controllable": self.controllable,
            "q_observable": is_observable(self.Q_sqrt, self.A),
            "bw_full_row_rank": self.bw_full_row_rank,
            "w_positive_definite": min_eig(self.W) > WEIGHT_TOL,
            "q_positive_definite": min_eig(self.Q) > WEIGHT_TOL,
        }

    def to_dict(self) -> Dict[str, Union[str, List]]:
        return {
            "kind": "state",
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "Bw": self.Bw.tolist(),
            "Q": self.Q.tolist(),
            "R": self.R.tolist(),
        }


@dataclass(frozen=True, eq=False)
class OutputPlant:
    """Output-feedback plant with process noise weight W and measurement noise weight V.

    The generalized plant matrices are derived as B1 = [W^1/2, 0],
    C1 = [Q^1/2; 0], D12 = [0; R^1/2] and D21 = [0, V^1/2].
    """

    A: np.ndarray
    B2: np.ndarray
    C2: np.ndarray
    W: np.ndarray
    V: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        A = check_square(self.A, "A")
        n = A.shape[0]
        B2 = as_matrix(self.B2, "B2")
        C2 = as_matrix(self.C2, "C2")
        W = check_square(self.W, "W")
        V = check_square(self.V, "V")
        Q = check_square(self.Q, "Q")
        R = check_square(self.R, "R")
        if B2.shape[0] != n:
            raise DimensionError("B2 must have {} rows, got {}".format(n, B2.shape))
        if C2.shape[1] != n:
            raise DimensionError("C2 must have {} columns, got {}".format(n, C2.shape))
        if W.shape[0] != n or Q.shape[0] != n:
            raise DimensionError("W and Q must be {0}x{0}".format(n))
        if V.shape[0] != C2.shape[0]:
            raise DimensionError("V must be {0}x{0}, got {1}".format(C2.shape[0], V.shape))
        if R.shape[0] != B2.shape[1]:
            raise DimensionError("R must be {0}x{0}, got {1}".format(B2.shape[1], R.shape))
        _check_weight(W, "W", definite=False)
        _check_weight(Q, "Q", definite=False)
        _check_weight(V, "V", definite=True)
        _check_weight(R, "R", definite=True)
        for name, value in zip(
            ("A", "B2", "C2", "W", "V", "Q", "R"), (A, B2, C2, sym(W), sym(V), sym(Q), sym(R))
        ):
            _freeze(self, name, value)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B2.shape[1]

    @property
    def p(self) -> int:
        return self.C2.shape[0]

    @property
    def W_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.W)

    @property
    def V_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.V)

    @property
    def Q_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.Q)

    @property
    def R_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.R)

    @property
    def B1(self) -> np.ndarray:
        return np.hstack([self.W_sqrt, np.zeros((self.n, self.p))])

    @property
    def C1(self) -> np.ndarray:
        return np.vstack([self.Q_sqrt, np.zeros((self.m, self.n))])

    @property
    def D12(self) -> np.ndarray:
        return np.vstack([np.zeros((self.n, self.m)), self.R_sqrt])

    @property
    def D21(self) -> np.ndarray:
        return np.hstack([np.zeros((self.p, self.n)), self.V_sqrt])

    def flags(self) -> Dict[str, bool]:
        return {
            "controllable": is_controllable(self.A, self.B2),
            "observable": is_observable(self.C2, self.A),
            "w_controllable": is_controllable(self.A, self.W_sqrt),
            "q_observable": is_observable(self.Q_sqrt, self.A),
            "w_positive_definite": min_eig(self.W) > WEIGHT_TOL,
        }

    def check_assumptions(self) -> None:
        """Raise PreconditionError unless the standard weight/minimality assumptions hold."""
        failed = [k for k, v in self.flags().items() if k != "w_positive_definite" and not v]
        if failed:
            raise PreconditionError(
                "output-feedback assumptions violated: {}".format(", ".join(failed))
            )

    def to_dict(self) -> Dict[str, Union[str, List]]:
        return {
            "kind": "output",
            "A": self.A.tolist(),
            "B2": self.B2.tolist(),
            "C2": self.C2.tolist(),
            "W": self.W.tolist(),
            "V": self.V.tolist(),
            "Q": self.Q.tolist(),
            "R": self.R.tolist(),
        }


@dataclass(frozen=True, eq=False)
class StaticGain:
    """Static state feedback ``u = K x``."""

    K: np.ndarray

    def __post_init__(self):
        _freeze(self, "K", as_matrix(self.K, "K"))

    def to_dict(self):
        return {"kind": "static", "K": self.K.tolist()}


def gain_matrix(K) -> np.ndarray:
    if isinstance(K, StaticGain):
        return K.K
    return as_matrix(K, "K")


@dataclass(frozen=True, eq=False)
class DynamicPolicy:
    """Full-order dynamic policy ``dxi = AK xi + BK y, u = CK xi + DK y``.

    Packed as ``[[DK, CK], [BK, AK]]`` of shape (m + n) x (p + n).
    """

    DK: np.ndarray
    CK: np.ndarray
    BK: np.ndarray
    AK: np.ndarray

    def __post_init__(self):
        AK = check_square(self.AK, "AK")
        BK = as_matrix(self.BK, "BK")
        CK = as_matrix(self.CK, "CK")
        DK = as_matrix(self.DK, "DK")
        q = AK.shape[0]
        if BK.shape[0] != q or CK.shape[1] != q:
            raise DimensionError(
                "policy blocks are inconsistent: AK {}, BK {}, CK {}".format(AK.shape, BK.shape, CK.shape)
            )
        if DK.shape != (CK.shape[0], BK.shape[1]):
            raise DimensionError("DK must be {}x{}, got {}".format(CK.shape[0], BK.shape[1], DK.shape))
        for name, value in zip(("DK", "CK", "BK", "AK"), (DK, CK, BK, AK)):
            _freeze(self, name, value)

    @classmethod
    def zeros(cls, n: int, m: int, p: int) -> "DynamicPolicy":
        return cls(DK=np.zeros((m, p)), CK=np.zeros((m, n)), BK=np.zeros((n, p)), AK=np.zeros((n, n)))

    @classmethod
    def from_packed(cls, packed, n: int, m: int, p: int) -> "DynamicPolicy":
        packed = as_matrix(packed, "policy")
        if packed.shape != (m + n, p + n):
            raise DimensionError(
                "packed policy must be {}x{}, got {}".format(m + n, p + n, packed.shape)
            )
        return cls(
            DK=packed[:m, :p], CK=packed[:m, p:], BK=packed[m:, :p], AK=packed[m:, p:]
        )

    @property
    def order(self) -> int:
        return self.AK.shape[0]

    @property
    def packed(self) -> np.ndarray:
        return np.block([[self.DK, self.CK], [self.BK, self.AK]])

    @property
    def strictly_proper(self) -> bool:
        return not np.any(self.DK)

    def similarity(self, S) -> "DynamicPolicy":
        """Policy with controller state ``S xi``: (S AK S^-1, S BK, CK S^-1, DK)."""
        S = check_square(S, "S")
        Sinv = la.inv(S)
        return DynamicPolicy(DK=self.DK, CK=self.CK @ Sinv, BK=S @ self.BK, AK=S @ self.AK @ Sinv)

    def to_dict(self):
        return {
            "kind": "dynamic",
            "DK": self.DK.tolist(),
            "CK": self.CK.tolist(),
            "BK": self.BK.tolist(),
            "AK": self.AK.tolist(),
        }

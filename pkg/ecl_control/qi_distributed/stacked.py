"""
Finite-horizon time-varying system stacked over the horizon.

For ``x_{t+1} = A_t x_t + B_t u_t + w_t``, ``y_t = C_t x_t + v_t`` with
``t = 0..N`` the stacked signals satisfy ``x = Z A x + Z B u + w`` with
``w = (x_0, w_0, ..., w_{N-1})``, hence ``x = P11 w + P12 u`` with
``P11 = (I - Z A)^-1`` and ``P12 = (I - Z A)^-1 Z B``.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError
from ecl_control.linalg import as_matrix, check_square, min_eig, sym

logger = logging.getLogger(__name__)

MatrixOrList = Union[np.ndarray, Sequence[np.ndarray]]


def _blocks(value: MatrixOrList, count: int, name: str) -> List[np.ndarray]:
    """A single matrix is repeated; a list must have ``count`` entries."""
    if isinstance(value, (list, tuple)) and len(value) and np.ndim(value[0]) == 2:
        if len(value) != count:
            raise DimensionError("{} needs {} blocks, got {}".format(name, count, len(value)))
        return [as_matrix(v, name) for v in value]
    v = as_matrix(value, name)
    return [v] * count


def _psd(M: np.ndarray, name: str) -> np.ndarray:
    M = sym(check_square(M, name))
    if M.size and min_eig(M) < -1e-12:
        raise DimensionError("{} must be positive semidefinite".format(name))
    return M


@dataclass(frozen=True, eq=False)
class StackedSystem:
    horizon: int
    A_blocks: List[np.ndarray]
    B_blocks: List[np.ndarray]
    C_blocks: List[np.ndarray]
    # covariance of the stacked w = (x_0, w_0, ..., w_{N-1}) and of v = (v_0, ..., v_N)
    Sigma_w: np.ndarray
    Sigma_v: np.ndarray
    M_blocks: List[np.ndarray]
    R_blocks: List[np.ndarray]
    mu0: Optional[np.ndarray] = None

    @classmethod
    def build(
        cls,
        A: MatrixOrList,
        B: MatrixOrList,
        C: MatrixOrList,
        horizon: int,
        Sigma_w,
        Sigma_v,
        M: MatrixOrList,
        R: MatrixOrList,
        Sigma_delta0=None,
        mu0=None,
    ) -> "StackedSystem":
        """Stack time-invariant matrices (or per-step lists) over ``horizon`` steps.

        ``A`` and ``B`` need N blocks, ``C`` and ``M`` need N + 1 and ``R`` N.
        ``Sigma_delta0`` defaults to ``Sigma_w``.
        """
        N = int(horizon)
        if N < 1:
            raise DimensionError("horizon must be positive, got {}".format(N))
        A_blocks = _blocks(A, N, "A")
        B_blocks = _blocks(B, N, "B")
        C_blocks = _blocks(C, N + 1, "C")
        M_blocks = [_psd(Mt, "M") for Mt in _blocks(M, N + 1, "M")]
        R_blocks = [_psd(Rt, "R") for Rt in _blocks(R, N, "R")]
        n = A_blocks[0].shape[0]
        m = B_blocks[0].shape[1]
        p = C_blocks[0].shape[0]
        for t, (At, Bt) in enumerate(zip(A_blocks, B_blocks)):
            if At.shape != (n, n) or Bt.shape != (n, m):
                raise DimensionError("step {}: A {} / B {} do not match n={}, m={}".format(t, At.shape, Bt.shape, n, m))
        for t, (Ct, Mt) in enumerate(zip(C_blocks, M_blocks)):
            if Ct.shape != (p, n) or Mt.shape != (p, p):
                raise DimensionError("step {}: C {} / M {} do not match p={}, n={}".format(t, Ct.shape, Mt.shape, p, n))
        if any(Rt.shape != (m, m) for Rt in R_blocks):
            raise DimensionError("R blocks must be {0}x{0}".format(m))

        Sw = _psd(Sigma_w, "Sigma_w")
        Sv = _psd(Sigma_v, "Sigma_v")
        S0 = Sw if Sigma_delta0 is None else _psd(Sigma_delta0, "Sigma_delta0")
        if Sw.shape != (n, n) or S0.shape != (n, n) or Sv.shape != (p, p):
            raise DimensionError("noise covariances must be {0}x{0} (state) and {1}x{1} (output)".format(n, p))
        Sigma_w_stacked = la.block_diag(S0, *([Sw] * N))
        Sigma_v_stacked = la.block_diag(*([Sv] * (N + 1)))
        if mu0 is not None:
            mu0 = np.asarray(mu0, dtype=float).reshape(-1)
            if mu0.shape != (n,):
                raise DimensionError("mu0 must have {} entries".format(n))
        return cls(
            horizon=N,
            A_blocks=A_blocks,
            B_blocks=B_blocks,
            C_blocks=C_blocks,
            Sigma_w=Sigma_w_stacked,
            Sigma_v=Sigma_v_stacked,
            M_blocks=M_blocks,
            R_blocks=R_blocks,
            mu0=mu0,
        )

    @property
    def n(self) -> int:
        return self.A_blocks[0].shape[0]

    @property
    def m(self) -> int:
        return self.B_blocks[0].shape[1]

    @property
    def p(self) -> int:
        return self.C_blocks[0].shape[0]

    @property
    def A(self) -> np.ndarray:
        return la.block_diag(*self.A_blocks, np.zeros((self.n, self.n)))

    @property
    def B(self) -> np.ndarray:
        return np.vstack([la.block_diag(*self.B_blocks), np.zeros((self.n, self.m * self.horizon))])

    @property
    def C(self) -> np.ndarray:
        return la.block_diag(*self.C_blocks)

    @property
    def Z(self) -> np.ndarray:
        N = self.horizon
        return np.kron(np.eye(N + 1, k=-1), np.eye(self.n))

    @property
    def P11(self) -> np.ndarray:
        return la.inv(np.eye(self.n * (self.horizon + 1)) - self.Z @ self.A)

    @property
    def P12(self) -> np.ndarray:
        return self.P11 @ self.Z @ self.B

    @property
    def G(self) -> np.ndarray:
        """``C P12``: response of the stacked output to the stacked input."""
        return self.C @ self.P12

    @property
    def M(self) -> np.ndarray:
        return la.block_diag(*self.M_blocks)

    @property
    def R(self) -> np.ndarray:
        return la.block_diag(*self.R_blocks)

    @property
    def w_second_moment(self) -> np.ndarray:
        if self.mu0 is None:
            return self.Sigma_w
        mean = np.concatenate([self.mu0, np.zeros(self.n * self.horizon)])
        return self.Sigma_w + np.outer(mean, mean)

    @property
    def open_loop_output_moment(self) -> np.ndarray:
        """Second moment of ``C P11 w + v``, the output with u = 0."""
        CP = self.C @ self.P11
        return sym(CP @ self.w_second_moment @ CP.T + self.Sigma_v)

    @property
    def policy_shape(self):
        return self.m * self.horizon, self.p * (self.horizon + 1)

    def to_dict(self) -> Dict[str, object]:
        N = self.horizon
        return {
            "kind": "stacked",
            "horizon": N,
            "A": [a.tolist() for a in self.A_blocks],
            "B": [b.tolist() for b in self.B_blocks],
            "C": [c.tolist() for c in self.C_blocks],
            "Sigma_delta0": self.Sigma_w[: self.n, : self.n].tolist(),
            "Sigma_w": self.Sigma_w[self.n : 2 * self.n, self.n : 2 * self.n].tolist(),
            "Sigma_v": self.Sigma_v[: self.p, : self.p].tolist(),
            "M": [mt.tolist() for mt in self.M_blocks],
            "R": [rt.tolist() for rt in self.R_blocks],
            "mu0": None if self.mu0 is None else self.mu0.tolist(),
        }

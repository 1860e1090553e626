import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError, PoleError
from ecl_control.plant.systems import DynamicPolicy, OutputPlant, Plant, gain_matrix

logger = logging.getLogger(__name__)

POLE_RCOND = 1e-13


@dataclass(frozen=True, eq=False)
class ClosedLoop:
    """Closed-loop realization (Acl, Bcl, Ccl, Dcl) from disturbance to performance output."""

    Acl: np.ndarray
    Bcl: np.ndarray
    Ccl: np.ndarray
    Dcl: np.ndarray

    @property
    def order(self) -> int:
        return self.Acl.shape[0]


def state_feedback_closed_loop(plant: Plant, K) -> ClosedLoop:
    """``dx = (A + BK)x + Bw w``, ``z = [Q^1/2; R^1/2 K] x``."""
    K = gain_matrix(K)
    if K.shape != (plant.m, plant.n):
        raise DimensionError("K must be {}x{}, got {}".format(plant.m, plant.n, K.shape))
    return ClosedLoop(
        Acl=plant.A + plant.B @ K,
        Bcl=plant.Bw.copy(),
        Ccl=np.vstack([plant.Q_sqrt, plant.R_sqrt @ K]),
        Dcl=np.zeros((plant.n + plant.m, plant.nw)),
    )


def assemble_closed_loop(plant: OutputPlant, policy: DynamicPolicy) -> ClosedLoop:
    """Interconnect an output-feedback plant with a full-order dynamic policy.

    Acl = [[A + B2 DK C2, B2 CK], [BK C2, AK]], Bcl = [B1 + B2 DK D21; BK D21],
    Ccl = [C1 + D12 DK C2, D12 CK], Dcl = D12 DK D21.
    """
    n, m, p = plant.n, plant.m, plant.p
    if (
        policy.DK.shape != (m, p)
        or policy.CK.shape[0] != m
        or policy.BK.shape[1] != p
    ):
        raise DimensionError(
            "policy with DK {} does not fit a plant with m={}, p={}".format(policy.DK.shape, m, p)
        )
    A, B2, C2 = plant.A, plant.B2, plant.C2
    B1, C1, D12, D21 = plant.B1, plant.C1, plant.D12, plant.D21
    DK, CK, BK, AK = policy.DK, policy.CK, policy.BK, policy.AK

    Acl = np.block([[A + B2 @ DK @ C2, B2 @ CK], [BK @ C2, AK]])
    Bcl = np.vstack([B1 + B2 @ DK @ D21, BK @ D21])
    Ccl = np.hstack([C1 + D12 @ DK @ C2, D12 @ CK])
    Dcl = D12 @ DK @ D21
    return ClosedLoop(Acl=Acl, Bcl=Bcl, Ccl=Ccl, Dcl=Dcl)


def closed_loop(plant: Union[Plant, OutputPlant], policy) -> ClosedLoop:
    if isinstance(plant, OutputPlant):
        if not isinstance(policy, DynamicPolicy):
            raise DimensionError("output-feedback plants need a DynamicPolicy")
        return assemble_closed_loop(plant, policy)
    if isinstance(policy, DynamicPolicy):
        raise DimensionError("state-feedback plants need a static gain")
    return state_feedback_closed_loop(plant, policy)


def resolvent(A: np.ndarray, s: complex) -> np.ndarray:
    """(sI - A)^-1; raises PoleError when s is (numerically) an eigenvalue of A."""
    n = A.shape[0]
    M = s * np.eye(n) - A
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    lu, piv = la.lu_factor(M, check_finite=False)
    diag = np.abs(np.diag(lu))
    if diag.min() <= POLE_RCOND * max(1.0, diag.max()):
        raise PoleError("sI - A is singular at s={}".format(s))
    return la.lu_solve((lu, piv), np.eye(n, dtype=complex))


def transfer_at(A, B, C, D, s: complex) -> np.ndarray:
    """Evaluate ``C (sI - A)^-1 B + D``; ``s = inf`` returns D."""
    if np.isinf(s):
        return np.asarray(D, dtype=complex)
    return C @ resolvent(A, s) @ B + D


def tzw_at(plant: Union[Plant, OutputPlant], policy, s: complex) -> np.ndarray:
    """Closed-loop frequency response from disturbance to performance output at ``s``."""
    cl = closed_loop(plant, policy)
    return transfer_at(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, s)

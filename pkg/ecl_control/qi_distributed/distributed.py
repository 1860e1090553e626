"""
Convex solve of the finite-horizon information-constrained problem.

With ``G = C P12`` and a causal policy ``u = K y``, the parameter
``Q = K (I - G K)^-1`` gives ``u = Q e`` and ``y = (I + G Q) e`` where
``e = C P11 w + v`` is the open-loop output. The expected cost is therefore
a convex quadratic in ``Q``; on a quadratically invariant pattern the map
``Q -> K`` preserves the pattern and the problem is solved exactly by the
normal equations over the pattern coordinates.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DegeneratePointError, DimensionError, QIError
from ecl_control.linalg import sym

from .pattern import SparsityPattern, qi_check
from .stacked import StackedSystem

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
RANK_TOL = 1e-12


@dataclass
class DistributedSolution:
    Q: np.ndarray
    K: np.ndarray
    cost: float
    open_loop_cost: float
    gradient_norm: float
    rank_deficient: bool = False


def _solve_factor(F: np.ndarray, what: str) -> np.ndarray:
    lu, piv = la.lu_factor(F)
    if np.min(np.abs(np.diag(lu)), initial=np.inf) <= SINGULAR_TOL * max(1.0, np.max(np.abs(F))):
        raise DegeneratePointError("{} is singular".format(what))
    return la.lu_solve((lu, piv), np.eye(F.shape[0]))


def _check_policy(G: np.ndarray, X: np.ndarray, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape != G.shape[::-1]:
        raise DimensionError("{} must be {}, got {}".format(name, G.shape[::-1], X.shape))
    return X


def h_map(Q: np.ndarray, G: np.ndarray) -> np.ndarray:
    """``K = (I + Q G)^-1 Q``."""
    Q = _check_policy(G, Q, "Q")
    return _solve_factor(np.eye(Q.shape[0]) + Q @ G, "I + Q G") @ Q


def h_inv(K: np.ndarray, G: np.ndarray) -> np.ndarray:
    """``Q = K (I - G K)^-1``."""
    K = _check_policy(G, K, "K")
    return K @ _solve_factor(np.eye(G.shape[0]) - G @ K, "I - G K")


def _causal(sys: StackedSystem, K: np.ndarray, pattern: Optional[SparsityPattern]) -> SparsityPattern:
    if pattern is None:
        pattern = SparsityPattern.causal(sys.horizon, sys.m, sys.p)
    pattern.require(K)
    return pattern


def cost_q(sys: StackedSystem, Q: np.ndarray) -> float:
    """Expected cost ``tr(M Sigma_y) + tr(R Sigma_u)`` for ``u = Q e``."""
    G = sys.G
    Q = _check_policy(G, Q, "Q")
    E = sys.open_loop_output_moment
    Ty = np.eye(G.shape[0]) + G @ Q
    Sigma_y = Ty @ E @ Ty.T
    Sigma_u = Q @ E @ Q.T
    return float(np.trace(sys.M @ Sigma_y) + np.trace(sys.R @ Sigma_u))


def cost_k(sys: StackedSystem, K: np.ndarray, pattern: Optional[SparsityPattern] = None) -> float:
    """Expected cost of ``u = K y``; ``K`` must lie in ``pattern`` (default: causal)."""
    K = _check_policy(sys.G, K, "K")
    _causal(sys, K, pattern)
    return cost_q(sys, h_inv(K, sys.G))


def open_loop_cost(sys: StackedSystem) -> float:
    return float(np.trace(sys.M @ sys.open_loop_output_moment))


def cost_q_grad(sys: StackedSystem, Q: np.ndarray) -> np.ndarray:
    G = sys.G
    E = sys.open_loop_output_moment
    H = sym(G.T @ sys.M @ G + sys.R)
    return 2.0 * (H @ Q @ E + G.T @ sys.M @ E)


def cost_k_grad(sys: StackedSystem, K: np.ndarray) -> np.ndarray:
    """Gradient of ``K -> cost_k`` through ``dQ = (I + Q G) dK (I - G K)^-1``."""
    G = sys.G
    K = _check_policy(G, K, "K")
    Q = h_inv(K, G)
    left = np.eye(Q.shape[0]) + Q @ G
    right = _solve_factor(np.eye(G.shape[0]) - G @ K, "I - G K")
    return left.T @ cost_q_grad(sys, Q) @ right.T


def projected_gradient_norm(sys: StackedSystem, K: np.ndarray, S: SparsityPattern) -> float:
    return float(la.norm(S.project(cost_k_grad(sys, K))))


def normal_equations(sys: StackedSystem, S: SparsityPattern):
    """Hessian and linear term of ``q -> cost_q(Q(q))`` over the pattern coordinates.

    With ``vec`` column-major, ``tr(H Q E Q^T) = vec(Q)^T (E kron H) vec(Q)``.
    """
    G = sys.G
    E = sys.open_loop_output_moment
    H = sym(G.T @ sys.M @ G + sys.R)
    linear = (G.T @ sys.M @ E).reshape(-1, order="F")
    flat = S.mask.reshape(-1, order="F")
    hess = np.kron(E, H)[np.ix_(flat, flat)]
    return sym(hess), linear[flat]


def solve_distributed(sys: StackedSystem, S: SparsityPattern, check: bool = True) -> DistributedSolution:
    """Minimize the expected cost over policies in the pattern ``S``.

    Raises :class:`QIError` when ``S`` is not quadratically invariant under
    ``C P12``: the problem in ``Q`` is then no longer equivalent.
    """
    G = sys.G
    if S.shape != sys.policy_shape:
        raise DimensionError("pattern is {} but the system needs {}".format(S.shape, sys.policy_shape))
    if check and not qi_check(S, G):
        raise QIError("information pattern is not quadratically invariant under C P12")

    base = open_loop_cost(sys)
    if S.dim == 0:
        Z = np.zeros(S.shape)
        return DistributedSolution(Q=Z, K=Z.copy(), cost=base, open_loop_cost=base, gradient_norm=0.0)

    hess, lin = normal_equations(sys, S)
    rank_deficient = False
    try:
        c, low = la.cho_factor(hess)
        if np.min(np.diag(c)) ** 2 <= RANK_TOL * np.max(np.diag(hess)):
            raise la.LinAlgError("ill-conditioned")
        q = la.cho_solve((c, low), -lin)
    except la.LinAlgError:
        q, _, rank, _ = la.lstsq(hess, -lin, cond=RANK_TOL)
        rank_deficient = rank < hess.shape[0]
        logger.info(
            "normal equations have rank {} of {}; using the minimum-norm solution".format(rank, hess.shape[0])
        )

    Q = S.from_coordinates(q)
    K = S.project(h_map(Q, G))
    cost = cost_q(sys, Q)
    grad = projected_gradient_norm(sys, K, S)
    logger.debug(
        "distributed solve: {} coordinates, cost {:.12g} (open loop {:.12g}), projected gradient {:.3e}".format(
            S.dim, cost, base, grad
        )
    )
    return DistributedSolution(
        Q=Q, K=K, cost=cost, open_loop_cost=base, gradient_norm=grad, rank_deficient=rank_deficient
    )

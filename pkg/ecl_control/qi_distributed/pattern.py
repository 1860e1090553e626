"""
Information patterns (sparsity subspaces of the stacked policy) and the
quadratic-invariance test.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from ecl_control.errors import DimensionError, InfeasiblePolicyError

logger = logging.getLogger(__name__)

QI_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SparsityPattern:
    """Binary mask over the ``mN x p(N+1)`` stacked policy.

    Block ``(t, i)`` maps ``y_i`` to ``u_t``; blocks with ``i > t`` read the
    future and must be empty.
    """

    mask: np.ndarray
    horizon: int
    m: int
    p: int

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        object.__setattr__(self, "mask", mask)
        shape = (self.m * self.horizon, self.p * (self.horizon + 1))
        if mask.shape != shape:
            raise DimensionError("pattern mask must be {}, got {}".format(shape, mask.shape))
        future = ~self.causal_mask(self.horizon, self.m, self.p)
        if np.any(mask & future):
            raise InfeasiblePolicyError("pattern admits non-causal entries (u_t reading y_i with i > t)")

    @staticmethod
    def causal_mask(horizon: int, m: int, p: int) -> np.ndarray:
        blocks = np.tril(np.ones((horizon, horizon + 1), dtype=bool))
        return np.kron(blocks, np.ones((m, p), dtype=bool))

    @classmethod
    def causal(cls, horizon: int, m: int, p: int) -> "SparsityPattern":
        """Centralized pattern: every causal entry free."""
        return cls(cls.causal_mask(horizon, m, p), horizon, m, p)

    @classmethod
    def empty(cls, horizon: int, m: int, p: int) -> "SparsityPattern":
        return cls(np.zeros((m * horizon, p * (horizon + 1)), dtype=bool), horizon, m, p)

    @classmethod
    def from_blocks(
        cls, horizon: int, m: int, p: int, allowed: Callable[[int, int], np.ndarray]
    ) -> "SparsityPattern":
        """Assemble from per-block masks ``allowed(t, i)`` (``m x p``) for ``i <= t``."""
        mask = np.zeros((m * horizon, p * (horizon + 1)), dtype=bool)
        for t in range(horizon):
            for i in range(t + 1):
                block = np.broadcast_to(np.asarray(allowed(t, i), dtype=bool), (m, p))
                mask[t * m : (t + 1) * m, i * p : (i + 1) * p] = block
        return cls(mask, horizon, m, p)

    @classmethod
    def delayed(cls, horizon: int, m: int, p: int, delay: int, local: Optional[np.ndarray] = None) -> "SparsityPattern":
        """``u_t`` reads every output older than ``delay`` steps and, through
        ``local`` (``m x p``), the recent ones."""
        local = np.ones((m, p), dtype=bool) if local is None else np.asarray(local, dtype=bool)
        full = np.ones((m, p), dtype=bool)
        return cls.from_blocks(horizon, m, p, lambda t, i: full if t - i >= delay else local)

    @classmethod
    def memoryless(cls, horizon: int, m: int, p: int) -> "SparsityPattern":
        """Only the diagonal blocks: ``u_t`` reads ``y_t`` alone."""
        zero = np.zeros((m, p), dtype=bool)
        one = np.ones((m, p), dtype=bool)
        return cls.from_blocks(horizon, m, p, lambda t, i: one if t == i else zero)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.mask.shape

    @property
    def dim(self) -> int:
        return int(self.mask.sum())

    @property
    def indices(self) -> List[Tuple[int, int]]:
        """Free entries in column-major order, matching ``vec``."""
        cols, rows = np.nonzero(self.mask.T)
        return list(zip(rows.tolist(), cols.tolist()))

    def basis(self) -> Iterator[np.ndarray]:
        for r, c in self.indices:
            E = np.zeros(self.shape)
            E[r, c] = 1.0
            yield E

    def contains(self, K: np.ndarray, tol: float = 0.0) -> bool:
        K = np.asarray(K, dtype=float)
        if K.shape != self.shape:
            raise DimensionError("policy must be {}, got {}".format(self.shape, K.shape))
        return bool(np.all(np.abs(K[~self.mask]) <= tol))

    def require(self, K: np.ndarray, tol: float = 0.0) -> None:
        if not self.contains(K, tol):
            worst = float(np.max(np.abs(np.asarray(K)[~self.mask])))
            raise InfeasiblePolicyError(
                "policy has an entry of size {:.3e} outside the information pattern".format(worst)
            )

    def project(self, K: np.ndarray) -> np.ndarray:
        return np.where(self.mask, K, 0.0)

    def coordinates(self, K: np.ndarray) -> np.ndarray:
        return np.asarray(K, dtype=float).T[self.mask.T]

    def from_coordinates(self, q: Sequence[float]) -> np.ndarray:
        K = np.zeros(self.shape)
        K.T[self.mask.T] = np.asarray(q, dtype=float)
        return K

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        return self.project(scale * rng.standard_normal(self.shape))


def _in_span(M: np.ndarray, span: Optional[np.ndarray], tol: float) -> bool:
    v = M.reshape(-1, order="F")
    scale = max(1.0, float(np.max(np.abs(v)))) if v.size else 1.0
    if span is None or span.shape[1] == 0:
        return float(np.max(np.abs(v), initial=0.0)) <= tol * scale
    resid = v - span @ (span.T @ v)
    return float(np.max(np.abs(resid), initial=0.0)) <= tol * scale


def qi_check_polarization(basis: Sequence[np.ndarray], G: np.ndarray, tol: float = 1e-10) -> bool:
    """Quadratic invariance of ``span(basis)`` under ``K -> K G K``.

    ``K G K`` is quadratic in the basis coordinates, so the subspace is invariant
    iff ``E_a G E_a`` and every polarized ``E_a G E_b + E_b G E_a`` lie in it.
    """
    basis = [np.asarray(E, dtype=float) for E in basis]
    if not basis:
        return True
    G = np.asarray(G, dtype=float)
    rows, cols = basis[0].shape
    if G.shape != (cols, rows):
        raise DimensionError("G must be {}x{} for policies of shape {}".format(cols, rows, basis[0].shape))
    span = la.orth(np.column_stack([E.reshape(-1, order="F") for E in basis]))
    products = [E @ G for E in basis]
    for a, b in itertools.combinations_with_replacement(range(len(basis)), 2):
        if a == b:
            term = products[a] @ basis[a]
        else:
            term = products[a] @ basis[b] + products[b] @ basis[a]
        if not _in_span(term, span, tol):
            logger.debug("quadratic invariance fails for basis pair ({}, {})".format(a, b))
            return False
    return True


def qi_check(S: SparsityPattern, G: np.ndarray, tol: float = QI_TOL) -> bool:
    """``K G K in S`` for every ``K in S``.

    For a sparsity pattern the polarized products of unit matrices reduce to
    ``S[i, j] and G[j, k] != 0 and S[k, l]  =>  S[i, l]``, i.e. the boolean
    support of ``S G S`` must lie inside ``S``.
    """
    G = np.asarray(G, dtype=float)
    if G.shape != S.shape[::-1]:
        raise DimensionError("G must be {}, got {}".format(S.shape[::-1], G.shape))
    support = S.mask.astype(int)
    coupling = (np.abs(G) > tol).astype(int)
    reach = (support @ coupling @ support) > 0
    violations = reach & ~S.mask
    if np.any(violations):
        r, c = np.argwhere(violations)[0]
        logger.debug("pattern is not quadratically invariant: K G K reaches entry ({}, {})".format(r, c))
        return False
    return True

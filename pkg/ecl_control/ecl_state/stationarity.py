"""
Peak-based subgradients of H-infinity costs and the Clarke stationarity measure.

A subgradient is determined by a list of peaks ``(s, Y)``: ``s = j omega`` is
a frequency where the largest singular value of the closed loop attains the
norm and ``Y`` is a Hermitian PSD weight, expressed in an orthonormal basis of
the top left singular subspace at ``s``. The weights' traces must sum to one.
"""

import logging
from typing import Callable, List, Sequence, Tuple

import cvxpy as cp
import numpy as np

from ecl_control.errors import DimensionError, PreconditionError
from ecl_control.norms import PeakData, peak_data
from ecl_control.plant import ClosedLoop, resolvent

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-9
STATIONARITY_TOL = 1e-6


def _omega(s) -> float:
    s = complex(s)
    return np.inf if np.isinf(s.real) or np.isinf(s.imag) else float(s.imag)


def resolve_peaks(cl: ClosedLoop, peaks: Sequence[Tuple[complex, np.ndarray]]) -> List[Tuple[PeakData, np.ndarray]]:
    """Attach singular-subspace data to each ``(s, Y)`` and validate the weights."""
    if not peaks:
        raise PreconditionError("at least one peak is needed")
    resolved, total = [], 0.0
    for s, Y in peaks:
        data = peak_data(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, _omega(s))
        Y = np.atleast_2d(np.asarray(Y, dtype=complex))
        r = data.multiplicity
        if Y.shape != (r, r):
            raise DimensionError(
                "peak weight at s={} must be {}x{} (multiplicity), got {}".format(s, r, r, Y.shape)
            )
        if not np.allclose(Y, Y.conj().T, atol=WEIGHT_TOL):
            raise PreconditionError("peak weight at s={} is not Hermitian".format(s))
        if np.linalg.eigvalsh(0.5 * (Y + Y.conj().T))[0] < -WEIGHT_TOL:
            raise PreconditionError("peak weight at s={} is not PSD".format(s))
        total += float(np.trace(Y).real)
        resolved.append((data, Y))
    if abs(total - 1.0) > 1e-8:
        raise PreconditionError("peak weights must have total trace 1, got {:.10g}".format(total))
    return resolved


def peak_subgradient(
    cl: ClosedLoop,
    cost: float,
    peaks: Sequence[Tuple[complex, np.ndarray]],
    left: Callable[[np.ndarray], np.ndarray],
    right: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    """``(1/J) sum Re{ right(R) T^H U Y U^H left(R) }^T`` over the peaks.

    ``R`` is the resolvent ``(sI - Acl)^-1`` (zero at s = inf); ``left`` and
    ``right`` give the factors of the derivative ``dT = left . dK . right``.
    """
    if cost <= 0:
        raise PreconditionError("subgradients of a zero cost are not defined")
    total = None
    for data, Y in resolve_peaks(cl, peaks):
        if np.isinf(data.omega):
            R = np.zeros(cl.Acl.shape, dtype=complex)
        else:
            R = resolvent(cl.Acl, data.s)
        U = data.basis
        term = right(R) @ data.value.conj().T @ U @ Y @ U.conj().T @ left(R)
        total = term if total is None else total + term
    return np.real(total).T / cost


def default_peaks(cl: ClosedLoop, omegas: Sequence[float]) -> List[Tuple[complex, np.ndarray]]:
    """Equal weight on the whole top singular subspace of every peak."""
    data = [peak_data(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, w) for w in omegas]
    total = sum(d.multiplicity for d in data)
    return [(d.s, np.eye(d.multiplicity) / total) for d in data]


def extreme_peak_weights(cl: ClosedLoop, omegas: Sequence[float]) -> List[List[Tuple[complex, np.ndarray]]]:
    """Rank-one weights generating the set of admissible peak weights.

    One generator per basis vector of every peak subspace, plus, for repeated
    singular values, the four pairings ``e_i + c e_j`` with ``c`` in
    ``{1, -1, i, -i}``. For a double singular value these are the six poles
    of the sphere of rank-one trace-one weights.
    """
    generators = []
    for w in omegas:
        d = peak_data(cl.Acl, cl.Bcl, cl.Ccl, cl.Dcl, w)
        r = d.multiplicity
        vectors = [np.eye(r)[:, i] for i in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                for c in (1.0, -1.0, 1j, -1j):
                    vectors.append((np.eye(r)[:, i] + c * np.eye(r)[:, j]) / np.sqrt(2))
        for v in vectors:
            v = v.astype(complex)
            generators.append([(d.s, np.outer(v, v.conj()))])
    return generators


def clarke_stationarity_measure(generators: Sequence[np.ndarray]) -> float:
    """Distance from zero to the convex hull of the generators (Frobenius norm)."""
    if len(generators) == 0:
        raise PreconditionError("at least one generator is needed")
    G = np.column_stack([np.asarray(g, dtype=float).ravel() for g in generators])
    if G.shape[1] == 1:
        return float(np.linalg.norm(G))
    lam = cp.Variable(G.shape[1], nonneg=True)
    prob = cp.Problem(cp.Minimize(cp.norm(G @ lam, 2)), [cp.sum(lam) == 1])
    prob.solve(solver=cp.CLARABEL)
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        logger.warning("stationarity QP ended with status {}".format(prob.status))
    weights = np.clip(lam.value, 0.0, None)
    weights = weights / weights.sum()
    return float(np.linalg.norm(G @ weights))


def is_stationary(measure: float, cost: float, tol: float = STATIONARITY_TOL) -> bool:
    return measure <= tol * (1.0 + abs(cost))

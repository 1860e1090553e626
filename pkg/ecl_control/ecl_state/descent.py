"""
Backtracking (sub)gradient descent on policy costs, restricted to the set of
stabilizing policies: a trial step whose cost is infinite is shrunk like one
that fails the sufficient-decrease test.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from ecl_control.errors import NotHurwitzError
from ecl_control.plant import Plant

logger = logging.getLogger(__name__)

ARMIJO = 1e-4
SHRINK = 0.5
MAX_BACKTRACKS = 50


@dataclass
class DescentResult:
    x: np.ndarray
    cost: float
    iterations: int
    converged: bool
    # (cost, norm of the step direction) per iterate
    history: List[Tuple[float, float]] = field(default_factory=list)


def _safe_cost(cost_fn: Callable[[np.ndarray], float], x: np.ndarray) -> float:
    try:
        return float(cost_fn(x))
    except NotHurwitzError:
        return np.inf


def policy_descent(
    cost_fn: Callable[[np.ndarray], float],
    grad_fn: Callable[[np.ndarray], np.ndarray],
    x0,
    step: float = 1.0,
    max_iter: int = 100,
    tol: float = 1e-8,
    armijo: float = ARMIJO,
    shrink: float = SHRINK,
    max_backtracks: int = MAX_BACKTRACKS,
) -> DescentResult:
    """Minimize ``cost_fn`` from the stabilizing point ``x0``.

    Stops when the direction norm drops below ``tol * (1 + |J|)`` (converged)
    or when no step size down to ``step * shrink**max_backtracks`` decreases
    the cost.
    """
    x = np.array(x0, dtype=float)
    J = _safe_cost(cost_fn, x)
    if not np.isfinite(J):
        raise NotHurwitzError("descent must start from a stabilizing policy")

    history = []
    for it in range(1, max_iter + 1):
        g = np.asarray(grad_fn(x), dtype=float)
        gnorm = float(np.linalg.norm(g))
        history.append((J, gnorm))
        if gnorm <= tol * (1.0 + abs(J)):
            return DescentResult(x=x, cost=J, iterations=it - 1, converged=True, history=history)

        t = step
        for _ in range(max_backtracks):
            trial = x - t * g
            J_trial = _safe_cost(cost_fn, trial)
            if J_trial <= J - armijo * t * gnorm ** 2:
                break
            t *= shrink
        else:
            logger.debug("line search failed at iteration {} (cost {:.10g})".format(it, J))
            return DescentResult(x=x, cost=J, iterations=it - 1, converged=False, history=history)

        x, J = trial, J_trial
        logger.debug("iteration {}: cost {:.10g} step {:.3e} |g| {:.3e}".format(it, J, t, gnorm))

    g = np.asarray(grad_fn(x), dtype=float)
    history.append((J, float(np.linalg.norm(g))))
    return DescentResult(x=x, cost=J, iterations=max_iter, converged=False, history=history)


def lqr_descent(plant: Plant, K0, **kwargs) -> DescentResult:
    from ecl_control.ecl_state.lqr import lqr_cost, lqr_grad

    return policy_descent(lambda K: lqr_cost(plant, K), lambda K: lqr_grad(plant, K), K0, **kwargs)


def hinf_sf_descent(plant: Plant, K0, **kwargs) -> DescentResult:
    from ecl_control.ecl_state.hinf_sf import hinf_sf_cost, hinf_sf_default_subgradient

    return policy_descent(
        lambda K: hinf_sf_cost(plant, K),
        lambda K: hinf_sf_default_subgradient(plant, K),
        K0,
        **kwargs,
    )

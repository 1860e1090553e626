"""
Solve an :class:`~ecl_control.conic.problem.SdpProblem` through cvxpy and
classify the outcome.

The interior point method is Clarabel (homogeneous embedding, Nesterov-Todd
scaling) unless configured otherwise. After the solve every LMI is re-evaluated
at the returned point to measure the worst relative violation and the
complementarity gap, so the reported status does not rely on the solver's own
accuracy claims alone.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Union

import cvxpy as cp
import numpy as np

from ecl_control.conic.problem import SdpProblem, as_value
from ecl_control.errors import ModelingError

logger = logging.getLogger(__name__)

FEAS_TOL = 1e-8
GAP_TOL = 1e-8
MAX_ITER = 200
BOUNDARY_TOL = 1e-6
DIVERGENCE_CAP = 1e6


class SdpStatus(Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"
    NEAR_BOUNDARY = "NEAR_BOUNDARY"
    NUMERICAL_LIMIT = "NUMERICAL_LIMIT"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SdpSolution:
    status: SdpStatus
    values: Dict[str, Union[float, np.ndarray]] = field(default_factory=dict)
    objective: Optional[float] = None
    violation: Optional[float] = None
    gap: Optional[float] = None
    dual_bound: Optional[float] = None
    boundary_margin: Optional[float] = None
    max_norm: Optional[float] = None
    iterations: Optional[int] = None
    solver_status: Optional[str] = None

    @property
    def usable(self) -> bool:
        """A primal point is available (possibly on the boundary or of limited accuracy)."""
        return self.status in (
            SdpStatus.OPTIMAL,
            SdpStatus.NEAR_BOUNDARY,
            SdpStatus.NUMERICAL_LIMIT,
        ) and bool(self.values)

    def summary(self) -> Dict[str, object]:
        return {
            "status": str(self.status),
            "objective": self.objective,
            "violation": self.violation,
            "gap": self.gap,
            "iterations": self.iterations,
        }


def _solver_options(solver: str, feas_tol: float, gap_tol: float, max_iter: int) -> Dict[str, object]:
    # ask the solver for a margin below the tolerances we check afterwards
    tight_feas, tight_gap = 0.1 * feas_tol, 0.1 * gap_tol
    if solver == "CLARABEL":
        return {
            "tol_feas": tight_feas,
            "tol_gap_abs": tight_gap,
            "tol_gap_rel": tight_gap,
            "tol_infeas_abs": tight_feas,
            "tol_infeas_rel": tight_feas,
            "max_iter": max_iter,
        }
    if solver == "SCS":
        return {"eps_abs": tight_feas, "eps_rel": tight_feas, "max_iters": 100 * max_iter}
    if solver == "CVXOPT":
        return {
            "feastol": tight_feas,
            "abstol": tight_gap,
            "reltol": tight_gap,
            "max_iters": max_iter,
        }
    raise ModelingError("unsupported conic solver '{}'".format(solver))


def _relative_min_eig(M: np.ndarray) -> float:
    M = 0.5 * (M + M.T)
    if M.size == 0:
        return 0.0
    lam = np.linalg.eigvalsh(M)
    return float(lam[0] / (1.0 + np.linalg.norm(M, 2)))


def _measure(problem: SdpProblem):
    """Worst relative violation, complementarity gap and smallest strict-hint margin."""
    violation, gap = 0.0, 0.0
    boundary_margin = np.inf
    for con in problem.lmis:
        M = np.atleast_2d(np.asarray(con.expr.value, dtype=float))
        k = M.shape[0]
        shifted = M - con.margin * np.eye(k) if con.margin else M
        rel = _relative_min_eig(shifted)
        violation = max(violation, -rel)
        if con.strict:
            boundary_margin = min(boundary_margin, _relative_min_eig(M))
        dual = con.handle
        if dual is not None and dual.dual_value is not None:
            Z = np.atleast_2d(np.asarray(dual.dual_value, dtype=float))
            gap += abs(float(np.sum(Z * shifted)))
    for con in problem.equalities:
        E = np.asarray(con.expr.value, dtype=float)
        violation = max(violation, float(np.abs(E).max(initial=0.0)) / (1.0 + float(np.abs(E).max(initial=0.0))))
    return violation, gap, boundary_margin


def solve(
    problem: SdpProblem,
    feas_tol: float = FEAS_TOL,
    gap_tol: float = GAP_TOL,
    max_iter: int = MAX_ITER,
    solver: str = "CLARABEL",
    boundary_tol: float = BOUNDARY_TOL,
    divergence_cap: float = DIVERGENCE_CAP,
    verbose: bool = False,
) -> SdpSolution:
    """Solve ``problem`` and classify the result.

    ``OPTIMAL`` requires the measured violation and relative gap within
    tolerance. ``NEAR_BOUNDARY`` flags an optimum that either sits on the
    boundary of a strict-hinted constraint or whose variables exceeded
    ``divergence_cap``: both indicate an infimum that is approached, not
    attained, over the open set.
    """
    prob = problem.to_cvxpy()
    # remember the cvxpy constraint object of every LMI to read its dual
    for con, cvx_con in zip(problem.lmis, prob.constraints):
        con.handle = cvx_con

    options = _solver_options(str(solver), feas_tol, gap_tol, max_iter)
    try:
        prob.solve(solver=str(solver), verbose=verbose, **options)
    except cp.error.SolverError as e:
        logger.warning("{} failed on '{}': {}".format(solver, problem.name, e))
        return SdpSolution(status=SdpStatus.NUMERICAL_LIMIT, solver_status="solver_error")

    raw = prob.status
    iterations = getattr(prob.solver_stats, "num_iters", None)
    logger.debug(
        "{}: solver status {} after {} iterations, value {}".format(
            problem.name, raw, iterations, prob.value
        )
    )

    if raw in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return SdpSolution(status=SdpStatus.INFEASIBLE, solver_status=raw, iterations=iterations)
    if raw in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
        return SdpSolution(status=SdpStatus.UNBOUNDED, solver_status=raw, iterations=iterations)
    if raw not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or problem.objective.value is None:
        return SdpSolution(
            status=SdpStatus.NUMERICAL_LIMIT, solver_status=raw, iterations=iterations
        )

    values = {}
    for name in list(problem.variables) + list(problem.expressions):
        values[name] = as_value(problem.lookup(name))

    objective = float(problem.objective.value) + problem.objective_offset
    violation, gap, boundary_margin = _measure(problem)
    rel_gap = gap / (1.0 + abs(objective))
    dual_bound = objective - gap if problem.sense == "min" else objective + gap
    max_norm = max(
        (float(np.linalg.norm(np.atleast_1d(v))) for v in values.values() if v is not None),
        default=0.0,
    )

    if violation > feas_tol or rel_gap > gap_tol or raw == cp.OPTIMAL_INACCURATE:
        status = SdpStatus.NUMERICAL_LIMIT
    else:
        status = SdpStatus.OPTIMAL
    if boundary_margin < boundary_tol or max_norm > divergence_cap:
        status = SdpStatus.NEAR_BOUNDARY

    logger.debug(
        "{}: {} objective={:.10g} violation={:.2e} gap={:.2e} margin={:.2e} max_norm={:.2e}".format(
            problem.name, status, objective, violation, rel_gap, boundary_margin, max_norm
        )
    )
    return SdpSolution(
        status=status,
        values=values,
        objective=objective,
        violation=violation,
        gap=rel_gap,
        dual_bound=dual_bound,
        boundary_margin=None if np.isinf(boundary_margin) else boundary_margin,
        max_norm=max_norm,
        iterations=iterations,
        solver_status=raw,
    )


def solve_with_config(problem: SdpProblem, cfg=None) -> SdpSolution:
    """:func:`solve` with tolerances taken from a ``SolverConfig`` group."""
    from ecl_control.dataclass.utils import config_get

    return solve(
        problem,
        feas_tol=config_get(cfg, "feas_tol", FEAS_TOL),
        gap_tol=config_get(cfg, "gap_tol", GAP_TOL),
        max_iter=config_get(cfg, "max_iter", MAX_ITER),
        solver=str(config_get(cfg, "solver", "CLARABEL")),
        boundary_tol=config_get(cfg, "boundary_tol", BOUNDARY_TOL),
        verbose=config_get(cfg, "verbose", False),
    )


def extract(sol: SdpSolution, name: str) -> Union[float, np.ndarray]:
    if name not in sol.values:
        raise ModelingError(
            "unknown variable '{}'; available: {}".format(name, ", ".join(sol.values) or "none")
        )
    if sol.status not in (SdpStatus.OPTIMAL, SdpStatus.NEAR_BOUNDARY):
        logger.warning("extracting '{}' from a {} solution".format(name, sol.status))
    return sol.values[name]

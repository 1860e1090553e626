"""
Certification of a candidate policy: its cost, the stationarity measure
(gradient norm or Clarke measure), non-degeneracy of the lift at the cost
level, and the gap to the optimum of the convex reformulation.

A stationary non-degenerate policy is globally optimal.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

from ecl_control.ecl_state import is_stationary

logger = logging.getLogger(__name__)

GLOBALLY_OPTIMAL = "GLOBALLY_OPTIMAL"
STATIONARY_POSSIBLY_DEGENERATE = "STATIONARY_POSSIBLY_DEGENERATE"
NOT_STATIONARY = "NOT_STATIONARY"
VERDICTS = (GLOBALLY_OPTIMAL, STATIONARY_POSSIBLY_DEGENERATE, NOT_STATIONARY)

GAP_REL_TOL = 1e-4


@dataclass
class Certificate:
    problem: str
    cost: float
    measure: float
    stationary: bool
    nondegenerate: bool
    verdict: str
    sdp_status: Optional[str] = None
    sdp_gamma: Optional[float] = None
    gap: Optional[float] = None

    def to_dict(self) -> OrderedDict:
        return OrderedDict(
            [
                ("problem", self.problem),
                ("verdict", self.verdict),
                ("cost", self.cost),
                ("measure", self.measure),
                ("stationary", self.stationary),
                ("nondegenerate", self.nondegenerate),
                ("sdp_status", self.sdp_status),
                ("sdp_gamma", self.sdp_gamma),
                ("gap", self.gap),
            ]
        )


def verdict(stationary: bool, nondegenerate: bool) -> str:
    if not stationary:
        return NOT_STATIONARY
    return GLOBALLY_OPTIMAL if nondegenerate else STATIONARY_POSSIBLY_DEGENERATE


def certify(problem, plant, policy, solve: bool = True) -> Certificate:
    """Certify ``policy`` for ``problem`` on ``plant``.

    Non-degeneracy is only tested at stationary points. With ``solve`` the
    convex reformulation is solved as well and the gap ``cost - gamma*`` is
    reported; it is informational and does not change the verdict.
    """
    cost = problem.cost(plant, policy)
    measure = problem.stationarity(plant, policy)
    stationary = is_stationary(measure, cost, problem.stationarity_tol)
    nondegenerate = bool(stationary and problem.nondegenerate(plant, policy, cost))
    cert = Certificate(
        problem=problem.name,
        cost=cost,
        measure=measure,
        stationary=stationary,
        nondegenerate=nondegenerate,
        verdict=verdict(stationary, nondegenerate),
    )
    logger.debug("{}: cost {:.10g}, measure {:.3e}, verdict {}".format(cert.problem, cost, measure, cert.verdict))

    if solve:
        sol = problem.solve(plant)
        cert.sdp_status = sol["status"]
        cert.sdp_gamma = sol["gamma"]
        cert.gap = cost - sol["gamma"]
        if cert.verdict == GLOBALLY_OPTIMAL and abs(cert.gap) > GAP_REL_TOL * (1.0 + abs(sol["gamma"])):
            logger.warning(
                "{}: policy certified optimal but the convex optimum differs by {:.3e}".format(cert.problem, cert.gap)
            )
    return cert

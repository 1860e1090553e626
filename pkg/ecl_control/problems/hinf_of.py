import logging
from collections import OrderedDict

import numpy as np

from ecl_control.ecl_dynamic import hinf_of_cost, hinf_of_lift_feasibility, hinf_of_solve, hinf_of_stationarity
from ecl_control.errors import SolverFailure
from ecl_control.plant import DynamicPolicy

from . import register_problem
from .problem import PolicySlice, Problem, ProblemConfig, check_dynamic_policy

logger = logging.getLogger(__name__)

SLICE_AK = -1.0
SLICE_DK = -1.0 - np.sqrt(3.0)


@register_problem("hinf-of", dataclass=ProblemConfig)
class HinfOfProblem(Problem):
    """Full-order (possibly proper) output feedback minimizing the closed-loop H-infinity norm."""

    plant_kind = "output"
    fixture = "output_scalar"

    def parse_policy(self, plant, doc, path="$"):
        return check_dynamic_policy(plant, super().parse_policy(plant, doc, path), path)

    def cost(self, plant, policy) -> float:
        return hinf_of_cost(plant, policy, rel_tol=self.numeric("norm_rel_tol", 1e-8))

    def stationarity(self, plant, policy) -> float:
        return hinf_of_stationarity(plant, policy)

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        try:
            P = hinf_of_lift_feasibility(
                plant,
                policy,
                self.lift_level(cost),
                p12_margin_tol=self.numeric("p12_margin", 1e-6),
                lmi_tol=self.numeric("lmi_tol", 1e-7),
                solver_cfg=self.solver_cfg,
            )
        except SolverFailure as e:
            logger.warning("H-infinity lift failed: {}".format(e))
            return False
        return P is not None

    def solve(self, plant):
        sol = hinf_of_solve(plant, self.solver_cfg)
        out = OrderedDict()
        out["problem"] = self.name
        out["status"] = str(sol.status)
        out["gamma"] = sol.gamma
        out["level"] = sol.level
        out["policy"] = self.emit_policy(sol.K) if sol.K is not None else None
        return out

    def slices(self, plant):
        slices = OrderedDict()
        if (plant.n, plant.m, plant.p) == (1, 1, 1):
            slices["bk-ck"] = PolicySlice(
                name="bk-ck",
                build=lambda bk, ck: DynamicPolicy(DK=[[SLICE_DK]], CK=[[ck]], BK=[[bk]], AK=[[SLICE_AK]]),
                grid="bk=-3:3:61,ck=-3:3:61",
                description="AK = -1, DK = -1 - sqrt(3)",
            )
        return slices

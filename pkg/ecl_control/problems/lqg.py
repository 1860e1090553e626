import logging
from collections import OrderedDict

import numpy as np

from ecl_control.ecl_dynamic import lqg_cost, lqg_grad, lqg_lift_feasibility, lqg_riccati_optimum, lqg_solve
from ecl_control.errors import SchemaError, SolverFailure
from ecl_control.plant import DynamicPolicy

from . import register_problem
from .problem import PolicySlice, Problem, ProblemConfig, check_dynamic_policy

logger = logging.getLogger(__name__)

SLICE_AK = -3.0


@register_problem("lqg", dataclass=ProblemConfig)
class LqgProblem(Problem):
    """Full-order strictly proper output feedback minimizing the closed-loop H2 norm."""

    plant_kind = "output"
    fixture = "output_scalar"

    def parse_policy(self, plant, doc, path="$"):
        K = check_dynamic_policy(plant, super().parse_policy(plant, doc, path), path)
        if not K.strictly_proper:
            raise SchemaError(path + ".DK", "LQG policies must be strictly proper (DK = 0)")
        return K

    def cost(self, plant, policy) -> float:
        return lqg_cost(plant, policy)

    def stationarity(self, plant, policy) -> float:
        dA, dB, dC = lqg_grad(plant, policy)
        return float(np.sqrt(sum(np.sum(d ** 2) for d in (dA, dB, dC))))

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        try:
            cert = lqg_lift_feasibility(
                plant,
                policy,
                self.lift_level(cost),
                p12_margin_tol=self.numeric("p12_margin", 1e-6),
                lmi_tol=self.numeric("lmi_tol", 1e-7),
                solver_cfg=self.solver_cfg,
            )
        except SolverFailure as e:
            logger.warning("LQG lift failed: {}".format(e))
            return False
        return cert is not None

    def solve(self, plant):
        sol = lqg_solve(plant, self.solver_cfg)
        gamma_ric, K_ric = lqg_riccati_optimum(plant)
        out = OrderedDict()
        out["problem"] = self.name
        out["status"] = str(sol.status)
        out["gamma"] = sol.gamma
        out["policy"] = self.emit_policy(sol.K) if sol.K is not None else None
        out["riccati_gamma"] = gamma_ric
        out["riccati_policy"] = self.emit_policy(K_ric)
        return out

    def slices(self, plant):
        slices = OrderedDict()
        if (plant.n, plant.m, plant.p) == (1, 1, 1):
            slices["bk-ck"] = PolicySlice(
                name="bk-ck",
                build=lambda bk, ck: DynamicPolicy(DK=[[0.0]], CK=[[ck]], BK=[[bk]], AK=[[SLICE_AK]]),
                grid="bk=-4:4:81,ck=-4:4:81",
                description="AK = {:g}, DK = 0".format(SLICE_AK),
            )
        return slices

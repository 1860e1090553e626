import logging
from collections import OrderedDict

import numpy as np

from ecl_control.ecl_state import lqr_cost, lqr_grad, lqr_is_lifted, lqr_lift, lqr_riccati_optimum, lqr_solve
from ecl_control.errors import NotHurwitzError, NotInEpigraphError, SchemaError
from ecl_control.plant import StaticGain, gain_matrix

from . import register_problem
from .problem import PolicySlice, Problem, ProblemConfig

logger = logging.getLogger(__name__)


@register_problem("lqr", dataclass=ProblemConfig)
class LqrProblem(Problem):
    """Static state feedback minimizing the squared H2 norm ``tr(P_K W)``."""

    plant_kind = "state"
    fixture = "two_state"

    def parse_policy(self, plant, doc, path="$"):
        K = super().parse_policy(plant, doc, path)
        if not isinstance(K, StaticGain):
            raise SchemaError(path + ".kind", "LQR policies are static gains")
        self.check_policy_shape(K.K, (plant.m, plant.n), path + ".K")
        return K

    def cost(self, plant, policy) -> float:
        return lqr_cost(plant, gain_matrix(policy))

    def stationarity(self, plant, policy) -> float:
        return float(np.linalg.norm(lqr_grad(plant, gain_matrix(policy))))

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        # the closed-loop Gramian lifts every stabilizing gain at its own cost
        try:
            pt = lqr_lift(plant, gain_matrix(policy), self.lift_level(cost))
        except (NotHurwitzError, NotInEpigraphError) as e:
            logger.debug("LQR lift failed: {}".format(e))
            return False
        return lqr_is_lifted(plant, pt)

    def solve(self, plant):
        sol = lqr_solve(plant, self.solver_cfg)
        gamma_ric, K_ric = lqr_riccati_optimum(plant)
        out = OrderedDict()
        out["problem"] = self.name
        out["status"] = str(sol.status)
        out["gamma"] = sol.gamma
        out["policy"] = self.emit_policy(StaticGain(sol.K)) if sol.K is not None else None
        out["riccati_gamma"] = gamma_ric
        out["riccati_policy"] = self.emit_policy(StaticGain(K_ric))
        return out

    def slices(self, plant):
        slices = OrderedDict()
        if (plant.n, plant.m) == (2, 1):
            slices["entries"] = PolicySlice(
                name="entries",
                build=lambda k1, k2: StaticGain([[k1, k2]]),
                grid="k1=-2:2:81,k2=-5:-1:81",
                description="K = [k1, k2]",
            )
        if (plant.n, plant.m) == (2, 2):
            slices["offdiag"] = PolicySlice(
                name="offdiag",
                build=lambda k1, k2: StaticGain([[-1.0, k1], [k2, -1.0]]),
                grid="k1=-3:3:101,k2=-3:3:101",
                description="K = [[-1, k1], [k2, -1]]",
            )
        return slices

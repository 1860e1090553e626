import logging
from collections import OrderedDict

from ecl_control.ecl_state import hinf_sf_cost, hinf_sf_lift, hinf_sf_solve, hinf_sf_stationarity
from ecl_control.errors import DegeneratePointError, NotInEpigraphError, SchemaError, SolverFailure
from ecl_control.plant import StaticGain, gain_matrix

from . import register_problem
from .problem import PolicySlice, Problem, ProblemConfig

logger = logging.getLogger(__name__)


@register_problem("hinf-sf", dataclass=ProblemConfig)
class HinfSfProblem(Problem):
    """Static state feedback minimizing the H-infinity norm from w to (Q^1/2 x, R^1/2 u)."""

    plant_kind = "state"
    fixture = "hinf_scalar"

    def parse_policy(self, plant, doc, path="$"):
        K = super().parse_policy(plant, doc, path)
        if not isinstance(K, StaticGain):
            raise SchemaError(path + ".kind", "state-feedback policies are static gains")
        self.check_policy_shape(K.K, (plant.m, plant.n), path + ".K")
        return K

    def cost(self, plant, policy) -> float:
        return hinf_sf_cost(plant, gain_matrix(policy), rel_tol=self.numeric("norm_rel_tol", 1e-8))

    def stationarity(self, plant, policy) -> float:
        return hinf_sf_stationarity(plant, gain_matrix(policy))

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        try:
            hinf_sf_lift(
                plant,
                gain_matrix(policy),
                self.lift_level(cost),
                lmi_tol=self.numeric("lmi_tol", 1e-7),
                solver_cfg=self.solver_cfg,
            )
        except (NotInEpigraphError, SolverFailure, DegeneratePointError) as e:
            logger.info("no bounded real certificate at the cost level: {}".format(e))
            return False
        return True

    def solve(self, plant):
        sol = hinf_sf_solve(plant, self.solver_cfg)
        out = OrderedDict()
        out["problem"] = self.name
        out["status"] = str(sol.status)
        out["gamma"] = sol.gamma
        out["policy"] = self.emit_policy(StaticGain(sol.K)) if sol.K is not None else None
        return out

    def slices(self, plant):
        slices = OrderedDict()
        if (plant.n, plant.m) == (2, 2):
            slices["diag"] = PolicySlice(
                name="diag",
                build=lambda k1, k2: StaticGain([[k1, 0.0], [0.0, k2]]),
                grid="k1=-3:0.9:79,k2=-3:0.9:79",
                description="K = diag(k1, k2)",
            )
        return slices

import logging
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from ecl_control.errors import SchemaError
from ecl_control.harness import serialization
from ecl_control.qi_distributed import (
    SparsityPattern,
    StackedSystem,
    cost_k,
    projected_gradient_norm,
    qi_check,
    solve_distributed,
)

from . import register_problem
from .problem import PolicySlice, Problem, ProblemConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QiInstance:
    """A stacked finite-horizon system together with its information pattern."""

    system: StackedSystem
    pattern: SparsityPattern

    @property
    def n(self) -> int:
        return self.system.n

    def to_dict(self):
        d = OrderedDict(self.system.to_dict())
        d["pattern"] = self.pattern.mask.astype(int).tolist()
        return d


@register_problem("qi", dataclass=ProblemConfig)
class QiProblem(Problem):
    """Finite-horizon output feedback over a quadratically invariant information pattern."""

    plant_kind = "stacked"
    fixture = "qi_chain"

    def parse_plant(self, doc, path="$"):
        system = super().parse_plant(doc, path)
        pattern = serialization.parse_pattern(doc.get("pattern"), system, path + ".pattern")
        return QiInstance(system=system, pattern=pattern)

    def parse_policy(self, plant, doc, path="$"):
        K = super().parse_policy(plant, doc, path)
        if not isinstance(K, np.ndarray):
            raise SchemaError(path + ".kind", "distributed policies are stacked gains")
        self.check_policy_shape(K, plant.system.policy_shape, path + ".K")
        return K

    def cost(self, plant, policy) -> float:
        return cost_k(plant.system, policy, plant.pattern)

    def stationarity(self, plant, policy) -> float:
        return projected_gradient_norm(plant.system, policy, plant.pattern)

    def nondegenerate(self, plant, policy, cost: float) -> bool:
        # h_inv is a diffeomorphism of the pattern onto itself when it is QI
        return qi_check(plant.pattern, plant.system.G)

    def solve(self, plant):
        sol = solve_distributed(plant.system, plant.pattern)
        out = OrderedDict()
        out["problem"] = self.name
        out["status"] = "OPTIMAL"
        out["gamma"] = sol.cost
        out["open_loop_cost"] = sol.open_loop_cost
        out["gradient_norm"] = sol.gradient_norm
        out["rank_deficient"] = sol.rank_deficient
        out["policy"] = self.emit_policy(sol.K)
        return out

    def slices(self, plant):
        slices = OrderedDict()
        S = plant.pattern
        if S.dim >= 2:

            def build(q1, q2):
                q = np.zeros(S.dim)
                q[:2] = (q1, q2)
                return S.from_coordinates(q)

            i, j = S.indices[0], S.indices[1]
            slices["coords"] = PolicySlice(
                name="coords",
                build=build,
                grid="q1=-2:2:41,q2=-2:2:41",
                description="K entries {} and {}, all other pattern entries zero".format(i, j),
            )
        return slices

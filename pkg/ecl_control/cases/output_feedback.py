"""
Output-feedback examples on the scalar plant ``A = B2 = C2 = W = V = Q = R = 1``.
"""

import numpy as np

from ecl_control.ecl_dynamic import hinf_of_cost, hinf_of_solve, lqg_cost, lqg_riccati_optimum, lqg_solve
from ecl_control.fixtures import fixture_path
from ecl_control.harness.landscape import feasibility_mask, landscape_grid, parse_grid
from ecl_control.harness.report import Expected

from . import register_case
from .case import ExampleCase

# separation principle: both Riccati solutions equal 1 + sqrt(2), J*^2 = (1 + sqrt 2) + (1 + sqrt 2)^3
LQG_SCALAR_GAMMA = np.sqrt(8.0 + 6.0 * np.sqrt(2.0))


@register_case("lqg-scalar")
class ScalarLqgCase(ExampleCase):
    description = "scalar LQG: SDP optimum against the two-Riccati optimum, recovered policy"

    def expected(self):
        return [
            Expected("riccati_gamma", LQG_SCALAR_GAMMA, 1e-10, "DERIVED", mode="rel"),
            Expected("riccati_policy_cost", LQG_SCALAR_GAMMA, 1e-8, "DERIVED", mode="rel"),
            Expected("riccati_policy_stationarity", 0.0, 1e-6, "DERIVED", mode="le"),
            Expected("riccati_policy_nondegenerate", True, provenance="PAPER", mode="eq"),
            Expected("sdp_gamma", LQG_SCALAR_GAMMA, 1e-5, "PAPER", mode="rel"),
            Expected("recovered_cost", LQG_SCALAR_GAMMA, 1e-3, "DERIVED", mode="rel"),
        ]

    def measure(self):
        problem = self.problem("lqg")
        plant = problem.load_plant(fixture_path("output_scalar"))
        gamma_ric, K_ric = lqg_riccati_optimum(plant)
        cost_ric = problem.cost(plant, K_ric)
        sol = lqg_solve(plant, self.solver_cfg)
        return {
            "riccati_gamma": gamma_ric,
            "riccati_policy_cost": cost_ric,
            "riccati_policy_stationarity": problem.stationarity(plant, K_ric),
            "riccati_policy_nondegenerate": problem.nondegenerate(plant, K_ric, cost_ric),
            "sdp_gamma": sol.gamma,
            "status": str(sol.status),
            "recovered_cost": lqg_cost(plant, sol.K) if sol.K is not None else np.inf,
        }


@register_case("fig1c-hinf-of")
class ScalarHinfOutputCase(ExampleCase):
    description = "scalar H-infinity output feedback: stabilizing (BK, CK) slice and SDP policy recovery"

    GRID = "bk=-3:3:61,ck=-3:3:61"

    def expected(self):
        return [
            Expected("mask_mismatches", 0, provenance="PAPER", mode="eq"),
            Expected("slice_point_gap", 0.0, 1e-6, "DERIVED", mode="ge"),
            Expected("recovery_ratio", 1.0, 1e-5, "DERIVED", mode="ge"),
            Expected("recovery_ratio", 1.0, 1e-3, "DERIVED", mode="le"),
        ]

    def measure(self):
        problem = self.problem("hinf-of")
        plant = problem.load_plant(fixture_path("output_scalar"))
        sl = problem.slice(plant, "bk-ck")
        axes = parse_grid(self.GRID)
        df = landscape_grid(problem.slice_cost(plant, sl), axes)
        mask = feasibility_mask(df, (axes[0].num, axes[1].num))
        bk, ck = np.meshgrid(axes[0].values, axes[1].values, indexing="ij")
        # closed loop [[-sqrt 3, ck], [bk, -1]] is Hurwitz iff bk ck < sqrt 3
        want = bk * ck < np.sqrt(3.0)

        sol = hinf_of_solve(plant, self.solver_cfg)
        recovered = hinf_of_cost(plant, sol.K) if sol.K is not None else np.inf
        return {
            "mask_mismatches": int(np.sum(mask != want)),
            "slice_point_gap": problem.cost(plant, sl.build(0.0, 0.0)) - sol.gamma,
            "sdp_gamma": sol.gamma,
            "status": str(sol.status),
            "recovery_ratio": recovered / sol.gamma,
        }

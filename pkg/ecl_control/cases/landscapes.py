"""
Landscape examples: the stabilizing region of the off-diagonal LQR slice and
the location of the LQR minimum on the two-state instance.
"""

import numpy as np

from ecl_control.fixtures import fixture_path
from ecl_control.harness.landscape import feasibility_mask, grid_minimum, landscape_grid, parse_grid
from ecl_control.harness.report import Expected

from . import register_case
from .case import ExampleCase

SQRT2 = np.sqrt(2.0)


@register_case("fig1a-mask")
class OffDiagonalMaskCase(ExampleCase):
    description = "A = 0, B = I: K = [[-1, k1], [k2, -1]] is stabilizing iff k1 k2 < 1; LQR minimum at K = -I"

    GRID = "k1=-3:3:101,k2=-3:3:101"

    def expected(self):
        return [
            Expected("mask_mismatches", 0, provenance="PAPER", mode="eq"),
            Expected("grid_min_location", [0.0, 0.0], 0.06, "PAPER"),
            Expected("grid_min_cost", 2.0, 1e-9, "DERIVED"),
        ]

    def measure(self):
        problem = self.problem("lqr")
        plant = problem.load_plant(fixture_path("integrator_pair"))
        sl = problem.slice(plant, "offdiag")
        axes = parse_grid(self.GRID)
        df = landscape_grid(problem.slice_cost(plant, sl), axes)
        k1, k2 = np.meshgrid(axes[0].values, axes[1].values, indexing="ij")
        mask = feasibility_mask(df, (axes[0].num, axes[1].num))
        best = grid_minimum(df)
        return {
            "mask_mismatches": int(np.sum(mask != (k1 * k2 < 1.0))),
            "feasible_points": int(mask.sum()),
            "grid_min_location": [float(best["coord1"]), float(best["coord2"])],
            "grid_min_cost": float(best["cost"]),
        }


@register_case("2.2-landscape")
class TwoStateLandscapeCase(ExampleCase):
    description = "two-state LQR landscape over k2 < -1: grid minimum next to K* and a one-point grid at K*"

    GRID = "k1=-2:2:81,k2=-5:-1:81"

    def expected(self):
        return [
            Expected("grid_min_location", [0.0, -1.0 - SQRT2], 0.05, "PAPER"),
            Expected("grid_min_cost", 5.0 + 4.0 * SQRT2, 0.0, "PAPER", mode="ge"),
            Expected("boundary_infeasible", True, provenance="PAPER", mode="eq"),
            Expected("single_point_rows", 1, provenance="TRIVIAL", mode="eq"),
            Expected("single_point_cost", 5.0 + 4.0 * SQRT2, 1e-10, "TRIVIAL", mode="rel"),
        ]

    def measure(self):
        problem = self.problem("lqr")
        plant = problem.load_plant(fixture_path("two_state"))
        sl = problem.slice(plant, "entries")
        cost_fn = problem.slice_cost(plant, sl)
        df = landscape_grid(cost_fn, parse_grid(self.GRID))
        best = grid_minimum(df)
        at_boundary = df[np.isclose(df["coord2"], -1.0)]
        one = landscape_grid(cost_fn, parse_grid("k1=0,k2={!r}".format(float(-1.0 - SQRT2))))
        return {
            "grid_min_location": [float(best["coord1"]), float(best["coord2"])],
            "grid_min_cost": float(best["cost"]),
            "boundary_infeasible": bool(np.all(~np.isfinite(at_boundary["cost"]))),
            "single_point_rows": len(one),
            "single_point_cost": float(one["cost"].iloc[0]),
        }

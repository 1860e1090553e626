"""
State-feedback examples: the two-state LQR instance, the scalar and the
non-coercive H-infinity instances, the nonsmooth diagonal instance and the
positive-quadrant example.
"""

import numpy as np

from ecl_control.ecl_state import (
    academic_f,
    academic_g,
    academic_h,
    academic_minimize,
    hinf_sf_default_subgradient,
    hinf_sf_descent,
    hinf_sf_extreme_subgradients,
    hinf_sf_solve,
    hinf_sf_stationarity,
    lqr_grad,
    lqr_riccati_optimum,
    lqr_solve,
    two_state_cost,
    two_state_plant,
    two_state_solve,
)
from ecl_control.fixtures import fixture_path
from ecl_control.harness.report import Expected
from ecl_control.plant import StaticGain

from . import register_case
from .case import ExampleCase

SQRT2 = np.sqrt(2.0)


@register_case("B1-lqr")
class TwoStateLqrCase(ExampleCase):
    description = "two-state LQR: cost and gradient at [1, -2], Riccati and SDP optima"

    K0 = [[1.0, -2.0]]

    def expected(self):
        gamma = 5.0 + 4.0 * SQRT2
        K_star = [[0.0, -1.0 - SQRT2]]
        return [
            Expected("fixture_matches_in_code", True, provenance="PAPER", mode="eq"),
            Expected("cost_at_k0", 37.0 / 3.0, 1e-9, "PAPER"),
            Expected("closed_form_cost_at_k0", 37.0 / 3.0, 1e-9, "PAPER"),
            Expected("grad_at_k0", [[24.0 / 9.0, 28.0 / 9.0]], 1e-9, "PAPER"),
            Expected("riccati_K", K_star, 1e-8, "PAPER"),
            Expected("riccati_gamma", gamma, 1e-6, "PAPER", mode="rel"),
            Expected("sdp_gamma", gamma, 1e-6, "PAPER", mode="rel"),
            Expected("sdp_K", K_star, 1e-5, "PAPER"),
            Expected("convex_image_gamma", gamma, 1e-6, "DERIVED", mode="rel"),
            Expected("convex_image_K", K_star, 1e-5, "DERIVED"),
        ]

    def measure(self):
        problem = self.problem("lqr")
        plant = problem.load_plant(fixture_path("two_state"))
        ref = two_state_plant()
        same = all(np.allclose(getattr(plant, k), getattr(ref, k)) for k in ("A", "B", "W", "Q", "R"))
        gamma_ric, K_ric = lqr_riccati_optimum(plant)
        sol = lqr_solve(plant, self.solver_cfg)
        t, _, k = two_state_solve(self.solver_cfg)
        return {
            "fixture_matches_in_code": bool(same),
            "cost_at_k0": problem.cost(plant, StaticGain(self.K0)),
            "closed_form_cost_at_k0": two_state_cost(self.K0[0]),
            "grad_at_k0": lqr_grad(plant, self.K0),
            "riccati_K": K_ric,
            "riccati_gamma": gamma_ric,
            "sdp_gamma": sol.gamma,
            "sdp_K": sol.K,
            "status": str(sol.status),
            "convex_image_gamma": t,
            "convex_image_K": np.reshape(k, (1, 2)),
        }


def _scalar_hinf_cost(k, q=0.1):
    return np.sqrt(q + k ** 2) / (1.0 - k)


def _scalar_hinf_derivative(k, q=0.1):
    return (q + k) / ((1.0 - k) ** 2 * np.sqrt(q + k ** 2))


@register_case("2.3-hinf-sf")
class ScalarHinfCase(ExampleCase):
    description = "scalar H-infinity state feedback: subgradients, SDP optimum and recovered gain"

    SAMPLES = np.linspace(-2.0, 0.8, 20)

    def expected(self):
        return [
            Expected("cost_at_kstar", np.sqrt(0.11) / 1.1, 1e-8, "PAPER"),
            Expected("subgradients", _scalar_hinf_derivative(self.SAMPLES), 1e-8, "PAPER"),
            Expected("stationarity_at_kstar", 0.0, 1e-6, "DERIVED", mode="le"),
            Expected("sdp_gamma", 0.3015, 1e-4, "PAPER"),
            Expected("recovered_k", -0.1, 1e-4, "PAPER"),
        ]

    def measure(self):
        problem = self.problem("hinf-sf")
        plant = problem.load_plant(fixture_path("hinf_scalar"))
        sol = hinf_sf_solve(plant, self.solver_cfg)
        subgradients = np.array([hinf_sf_default_subgradient(plant, [[k]])[0, 0] for k in self.SAMPLES])
        k_rec = float(sol.Y[0, 0] / sol.X[0, 0])
        return {
            "cost_at_kstar": problem.cost(plant, StaticGain([[-0.1]])),
            "subgradients": subgradients,
            "stationarity_at_kstar": hinf_sf_stationarity(plant, [[-0.1]]),
            "sdp_gamma": sol.gamma,
            "recovered_k": k_rec,
            "status": str(sol.status),
        }


@register_case("C21-noncoercive")
class NonCoerciveCase(ExampleCase):
    description = "non-coercive H-infinity instance: the infimum 1 is approached only as k grows"

    STARTS = np.linspace(1.5, 6.0, 10)
    MAX_ITER = 50

    def expected(self):
        return [
            Expected("cost_at_2", np.sqrt(5.0), 1e-8, "DERIVED"),
            Expected("cost_at_1e3", np.sqrt(1.0 + 1e6) / 999.0, 1e-6, "PAPER"),
            Expected("cost_at_1e4", 1.0, 1e-3, "PAPER"),
            Expected("sdp_status", "NEAR_BOUNDARY", provenance="PAPER", mode="eq"),
            Expected("sdp_gamma", 1.0, 1e-3, "PAPER"),
            Expected("descent_min_measure", 1e-3, 0.0, "PAPER", mode="ge"),
            Expected("descent_converged", 0, provenance="PAPER", mode="eq"),
        ]

    def measure(self):
        problem = self.problem("hinf-sf")
        plant = problem.load_plant(fixture_path("noncoercive"))
        sol = hinf_sf_solve(plant, self.solver_cfg)
        measures, converged = [], 0
        for k0 in self.STARTS:
            res = hinf_sf_descent(plant, [[k0]], max_iter=self.MAX_ITER)
            converged += int(res.converged)
            measures.append(min(g for _, g in res.history))
            measures.append(hinf_sf_stationarity(plant, res.x))
        return {
            "cost_at_2": problem.cost(plant, StaticGain([[2.0]])),
            "cost_at_1e3": problem.cost(plant, StaticGain([[1e3]])),
            "cost_at_1e4": problem.cost(plant, StaticGain([[1e4]])),
            "sdp_status": str(sol.status),
            "sdp_gamma": sol.gamma,
            "descent_min_measure": float(min(measures)),
            "descent_converged": converged,
        }


@register_case("B3-nonsmooth")
class NonsmoothCase(ExampleCase):
    description = "diagonal H-infinity instance: repeated peak, nonsmooth cost, Clarke stationary optimum"

    DIAGONAL = np.array([-3.0, -2.0, -0.5, -0.25, -0.1])

    def expected(self):
        return [
            Expected("cost_on_diagonal", np.sqrt(self.DIAGONAL ** 2 + 1.0) / (1.0 - self.DIAGONAL), 1e-8, "PAPER"),
            Expected("extreme_subgradient_gap", 1e-3, 0.0, "PAPER", mode="ge"),
            Expected("clarke_at_kstar", 0.0, 1e-6, "PAPER", mode="le"),
            Expected("cost_at_kstar", SQRT2 / 2.0, 1e-8, "PAPER"),
            Expected("sdp_gamma", SQRT2 / 2.0, 1e-6, "PAPER"),
        ]

    def measure(self):
        problem = self.problem("hinf-sf")
        plant = problem.load_plant(fixture_path("nonsmooth"))
        costs, gaps = [], []
        for k in self.DIAGONAL:
            K = k * np.eye(2)
            costs.append(problem.cost(plant, StaticGain(K)))
            gens = hinf_sf_extreme_subgradients(plant, K)
            gaps.append(max(np.linalg.norm(a - b) for a in gens for b in gens))
        sol = hinf_sf_solve(plant, self.solver_cfg)
        return {
            "cost_on_diagonal": np.array(costs),
            "extreme_subgradient_gap": float(min(gaps)),
            "clarke_at_kstar": hinf_sf_stationarity(plant, -np.eye(2)),
            "cost_at_kstar": problem.cost(plant, StaticGain(-np.eye(2))),
            "sdp_gamma": sol.gamma,
        }


@register_case("academic")
class PositiveQuadrantCase(ExampleCase):
    description = "positive-quadrant example: convex image under g(x) = (x2/x1, x2), smooth and nonsmooth"

    def expected(self):
        return [
            Expected("x_smooth", [0.5, 1.0], 1e-6, "PAPER"),
            Expected("f_smooth", 0.0, 1e-8, "PAPER"),
            Expected("x_nonsmooth", [0.5, 1.0], 1e-5, "PAPER"),
            Expected("g_of_xstar", [2.0, 1.0], 1e-12, "PAPER"),
            Expected("h_at_ystar", 0.0, 0.0, "PAPER"),
            Expected("closed_form_error", 0.0, 1e-12, "DERIVED", mode="le"),
        ]

    def measure(self):
        x_s, f_s = academic_minimize("smooth")
        x_n, _ = academic_minimize("nonsmooth")
        rng = np.random.default_rng(0)
        err = 0.0
        for x in rng.uniform(0.1, 3.0, size=(20, 2)):
            d = np.array([x[1] / x[0] - 2.0, x[1] - 1.0])
            direct = {"smooth": float(d @ d), "nonsmooth": float(np.abs(d).sum())}
            for variant in ("smooth", "nonsmooth"):
                err = max(err, abs(academic_f(x, variant) - direct[variant]))
        return {
            "x_smooth": x_s,
            "f_smooth": f_s,
            "x_nonsmooth": x_n,
            "g_of_xstar": academic_g([0.5, 1.0]),
            "h_at_ystar": academic_h([2.0, 1.0]),
            "closed_form_error": err,
        }

import os
import tempfile
import unittest

import cvxpy as cp
import numpy as np

from ecl_control.conic import SdpProblem, SdpStatus, bmat, extract, solve, to_sdpa, write_sdpa
from ecl_control.ecl_state import hinf_sf_sdp, lqr_sdp
from ecl_control.errors import ModelingError
from ecl_control.fixtures import load_fixture


def toy_problem():
    p = SdpProblem("toy")
    g = p.scalar("gamma")
    p.add_lmi(bmat([[g, 1.0], [1.0, g]]))
    p.minimize(g)
    return p


class TestSdpProblem(unittest.TestCase):
    def test_duplicate_names(self):
        p = SdpProblem()
        p.scalar("x")
        with self.assertRaises(ModelingError):
            p.symmetric("x", 2)
        with self.assertRaises(ModelingError):
            p.define("x", np.eye(2))

    def test_rejects_non_square_and_nonaffine(self):
        p = SdpProblem()
        Y = p.matrix("Y", 2, 3)
        with self.assertRaises(ModelingError):
            p.add_lmi(Y)
        X = p.symmetric("X", 2)
        with self.assertRaises(ModelingError):
            p.add_lmi(X @ X)
        with self.assertRaises(ModelingError):
            p.minimize(cp.sum_squares(Y))

    def test_needs_objective(self):
        p = SdpProblem("empty")
        p.scalar("t")
        with self.assertRaisesRegex(ModelingError, "no objective"):
            p.to_cvxpy()

    def test_unregistered_variable(self):
        p = SdpProblem("stray")
        t = p.scalar("t")
        p.add_lmi(bmat([[t - cp.Variable(name="ghost")]]))
        p.minimize(t)
        with self.assertRaisesRegex(ModelingError, "ghost"):
            p.validate()

    def test_num_scalars(self):
        p = SdpProblem()
        p.scalar("a")
        p.matrix("B", 2, 3)
        p.symmetric("C", 3)
        self.assertEqual(p.num_scalars, 1 + 6 + 6)


class TestSolve(unittest.TestCase):
    def test_toy(self):
        sol = solve(toy_problem())
        self.assertEqual(sol.status, SdpStatus.OPTIMAL)
        self.assertAlmostEqual(sol.objective, 1.0, places=6)
        self.assertAlmostEqual(extract(sol, "gamma"), sol.objective, places=10)
        self.assertLessEqual(sol.violation, 1e-8)
        self.assertLessEqual(sol.gap, 1e-8)
        self.assertGreaterEqual(sol.objective, sol.dual_bound - 1e-8)

    def test_deterministic(self):
        a, b = solve(toy_problem()), solve(toy_problem())
        self.assertEqual(a.objective, b.objective)
        self.assertEqual(a.iterations, b.iterations)

    def test_infeasible(self):
        p = SdpProblem("infeasible")
        t = p.scalar("t")
        p.add_lmi(bmat([[t - 1.0]]))
        p.add_lmi(bmat([[-t]]))
        p.minimize(t)
        self.assertEqual(solve(p).status, SdpStatus.INFEASIBLE)

    def test_unbounded(self):
        p = SdpProblem("unbounded")
        t = p.scalar("t")
        p.add_lmi(bmat([[-t]]))
        p.minimize(t)
        sol = solve(p)
        self.assertEqual(sol.status, SdpStatus.UNBOUNDED)
        self.assertFalse(sol.usable)

    def test_equality(self):
        p = SdpProblem("eq")
        X = p.symmetric("X", 2)
        p.add_equality(X - np.array([[2.0, 1.0], [1.0, 3.0]]))
        p.add_lmi(X)
        p.minimize(cp.trace(X))
        sol = solve(p)
        self.assertEqual(sol.status, SdpStatus.OPTIMAL)
        np.testing.assert_allclose(sol.values["X"], [[2.0, 1.0], [1.0, 3.0]], atol=1e-7)

    def test_extract_unknown(self):
        with self.assertRaisesRegex(ModelingError, "available: gamma"):
            extract(solve(toy_problem()), "delta")

    def test_lqr_two_state(self):
        plant = load_fixture("two_state")
        for eliminate in (True, False):
            sol = solve(lqr_sdp(plant, eliminate=eliminate))
            self.assertEqual(sol.status, SdpStatus.OPTIMAL)
            self.assertAlmostEqual(sol.objective, 5 + 4 * np.sqrt(2), delta=1e-6)
            Y, X = np.atleast_2d(extract(sol, "Y")), extract(sol, "X")
            np.testing.assert_allclose(Y @ np.linalg.inv(X), [[0.0, -1 - np.sqrt(2)]], atol=1e-4)

    def test_lqr_equality_residual(self):
        plant = load_fixture("two_state")
        sol = solve(lqr_sdp(plant, eliminate=False))
        X, Y = sol.values["X"], np.atleast_2d(sol.values["Y"])
        E = plant.A @ X + plant.B @ Y
        self.assertLessEqual(np.abs(E + E.T + plant.W).max(), 1e-7)

    def test_static_gain_example(self):
        sol = solve(hinf_sf_sdp(load_fixture("hinf_scalar")))
        self.assertAlmostEqual(sol.objective, np.sqrt(0.11) / 1.1, delta=1e-5)
        self.assertAlmostEqual(np.asarray(extract(sol, "X")).item(), 3.015, delta=1e-2)
        y, x = (np.asarray(extract(sol, v)).item() for v in ("Y", "X"))
        self.assertAlmostEqual(y / x, -0.1, delta=1e-4)

    def test_unattained_infimum(self):
        sol = solve(hinf_sf_sdp(load_fixture("noncoercive")))
        self.assertEqual(sol.status, SdpStatus.NEAR_BOUNDARY)
        self.assertAlmostEqual(sol.objective, 1.0, delta=1e-3)
        self.assertTrue(sol.usable)


class TestSdpaExport(unittest.TestCase):
    def test_toy_layout(self):
        lines = to_sdpa(toy_problem()).splitlines()
        self.assertTrue(lines[0].startswith('"toy: 1 coordinates, 1 LMI blocks'))
        self.assertEqual(lines[2:6], ["1", "1", "2", "1"])
        # F0 = -M(0) has -1 off the diagonal, F1 = I
        self.assertEqual(lines[6:], ["0 1 1 2 -1", "1 1 1 1 1", "1 1 2 2 1"])

    def test_equality_block_and_maximize(self):
        p = SdpProblem("eq")
        t = p.scalar("t")
        p.add_equality(bmat([[t - 2.0]]))
        p.add_lmi(bmat([[t]]))
        p.maximize(t)
        lines = to_sdpa(p).splitlines()
        self.assertEqual(lines[4], "1 -2")
        self.assertEqual(lines[5], "-1")

    def test_write_keeps_values(self):
        p = toy_problem()
        solve(p)
        before = p.variables["gamma"].var.value
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "toy.dat-s")
            write_sdpa(p, path)
            with open(path) as f:
                self.assertEqual(f.read(), to_sdpa(p))
        self.assertEqual(p.variables["gamma"].var.value, before)


if __name__ == "__main__":
    unittest.main()

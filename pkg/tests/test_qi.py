import unittest

import numpy as np

from ecl_control.errors import DimensionError, InfeasiblePolicyError, QIError
from ecl_control.fixtures import load_fixture
from ecl_control.qi_distributed import (
    SparsityPattern,
    StackedSystem,
    cost_k,
    cost_k_grad,
    cost_q,
    cost_q_grad,
    h_inv,
    h_map,
    open_loop_cost,
    projected_gradient_norm,
    qi_check,
    qi_check_polarization,
    solve_distributed,
)
from tests import oracles


def scalar_system(horizon):
    return StackedSystem.build(A=1.0, B=1.0, C=1.0, horizon=horizon, Sigma_w=1.0, Sigma_v=1.0, M=1.0, R=1.0)


def random_system(rng, horizon=3, n=2, m=2, p=2):
    def psd(k):
        F = rng.standard_normal((k, k))
        return F @ F.T + 0.5 * np.eye(k)

    return StackedSystem.build(
        A=[0.8 * rng.standard_normal((n, n)) for _ in range(horizon)],
        B=rng.standard_normal((n, m)),
        C=rng.standard_normal((p, n)),
        horizon=horizon,
        Sigma_w=psd(n),
        Sigma_v=psd(p),
        M=psd(p),
        R=psd(m),
    )


def fd_gradient(f, X, h=1e-6, mask=None):
    g = np.zeros_like(X)
    for idx in zip(*np.nonzero(np.ones_like(X) if mask is None else mask)):
        E = np.zeros_like(X)
        E[idx] = h
        g[idx] = (f(X + E) - f(X - E)) / (2 * h)
    return g


class TestStackedSystem(unittest.TestCase):
    def test_chain_fixture(self):
        sys = load_fixture("qi_chain")
        self.assertIsInstance(sys, StackedSystem)
        self.assertEqual(sys.policy_shape, (2, 3))
        np.testing.assert_allclose(sys.G, [[0, 0], [1, 0], [1, 1]])
        self.assertAlmostEqual(open_loop_cost(sys), 9.0, places=12)

    def test_control_enters_strictly_later(self):
        rng = np.random.default_rng(0)
        sys = random_system(rng, horizon=4, n=3, m=2, p=2)
        m, p = sys.m, sys.p
        G = sys.G
        for t in range(sys.horizon):
            for i in range(t + 1):
                np.testing.assert_array_equal(G[i * p : (i + 1) * p, t * m : (t + 1) * m], 0.0)

    def test_dimension_errors(self):
        with self.assertRaises(DimensionError):
            StackedSystem.build(A=1.0, B=1.0, C=1.0, horizon=0, Sigma_w=1.0, Sigma_v=1.0, M=1.0, R=1.0)
        with self.assertRaises(DimensionError):
            StackedSystem.build(
                A=np.eye(2), B=np.ones((3, 1)), C=np.ones((1, 2)), horizon=2,
                Sigma_w=np.eye(2), Sigma_v=1.0, M=1.0, R=1.0,
            )
        with self.assertRaises(DimensionError):
            StackedSystem.build(A=[np.eye(1)] * 3, B=1.0, C=1.0, horizon=2, Sigma_w=1.0, Sigma_v=1.0, M=1.0, R=1.0)
        with self.assertRaises(DimensionError):
            StackedSystem.build(
                A=np.eye(2), B=np.ones((2, 1)), C=np.ones((1, 2)), horizon=2,
                Sigma_w=1.0, Sigma_v=1.0, M=1.0, R=1.0,
            )


class TestSparsityPattern(unittest.TestCase):
    def test_causal_shape_and_dim(self):
        S = SparsityPattern.causal(2, 1, 1)
        np.testing.assert_array_equal(S.mask, [[1, 0, 0], [1, 1, 0]])
        self.assertEqual(S.dim, 3)
        self.assertEqual(S.indices, [(0, 0), (1, 0), (1, 1)])

    def test_non_causal_mask_rejected(self):
        with self.assertRaises(InfeasiblePolicyError):
            SparsityPattern(np.ones((2, 3)), 2, 1, 1)
        with self.assertRaises(DimensionError):
            SparsityPattern(np.ones((2, 2)), 2, 1, 1)

    def test_require(self):
        S = SparsityPattern.memoryless(2, 1, 1)
        S.require(np.array([[1.0, 0, 0], [0, 2.0, 0]]))
        with self.assertRaises(InfeasiblePolicyError):
            S.require(np.array([[1.0, 0, 0], [0.5, 2.0, 0]]))

    def test_coordinates(self):
        rng = np.random.default_rng(1)
        S = SparsityPattern.delayed(3, 2, 1, delay=1)
        K = S.random(rng)
        self.assertTrue(S.contains(K))
        q = S.coordinates(K)
        self.assertEqual(q.shape, (S.dim,))
        np.testing.assert_array_equal(S.from_coordinates(q), K)

    def test_delayed_without_local_entries(self):
        S = SparsityPattern.delayed(3, 1, 1, delay=1, local=np.zeros((1, 1)))
        np.testing.assert_array_equal(S.mask, [[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0]])


class TestQuadraticInvariance(unittest.TestCase):
    def test_chain_patterns(self):
        G = load_fixture("qi_chain").G
        self.assertTrue(qi_check(SparsityPattern.causal(2, 1, 1), G))
        self.assertTrue(qi_check(SparsityPattern.empty(2, 1, 1), G))
        self.assertTrue(qi_check(SparsityPattern.delayed(2, 1, 1, delay=1, local=np.zeros((1, 1))), G))
        self.assertFalse(qi_check(SparsityPattern.memoryless(2, 1, 1), G))

    def test_memoryless_violation(self):
        G = load_fixture("qi_chain").G
        S = SparsityPattern.memoryless(2, 1, 1)
        K = S.from_coordinates([1.0, 1.0])
        KGK = K @ G @ K
        self.assertNotEqual(KGK[1, 0], 0.0)
        self.assertFalse(S.mask[1, 0])

    def test_zero_coupling(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            mask = SparsityPattern.causal_mask(3, 2, 2) & (rng.random((6, 8)) < 0.5)
            S = SparsityPattern(mask, 3, 2, 2)
            self.assertTrue(qi_check(S, np.zeros((8, 6))))

    def test_polarization_agrees_with_support_test(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            sys = random_system(rng, horizon=2, n=2, m=1, p=2)
            mask = SparsityPattern.causal_mask(2, 1, 2) & (rng.random((2, 6)) < 0.6)
            S = SparsityPattern(mask, 2, 1, 2)
            self.assertEqual(qi_check_polarization(list(S.basis()), sys.G), qi_check(S, sys.G))

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionError):
            qi_check(SparsityPattern.causal(2, 1, 1), np.zeros((2, 3)))


class TestParameterization(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(4)
        self.sys = random_system(self.rng)
        self.S = SparsityPattern.causal(self.sys.horizon, self.sys.m, self.sys.p)

    def test_round_trip(self):
        G = self.sys.G
        for _ in range(200):
            Q = self.S.random(self.rng)
            np.testing.assert_allclose(h_inv(h_map(Q, G), G), Q, atol=1e-9 * max(1.0, np.abs(Q).max()))

    def test_pattern_preserved(self):
        G = self.sys.G
        S = SparsityPattern.delayed(self.sys.horizon, self.sys.m, self.sys.p, delay=1, local=np.zeros((2, 2)))
        self.assertTrue(qi_check(S, G))
        for _ in range(50):
            Q = S.random(self.rng)
            self.assertTrue(S.contains(h_map(Q, G), tol=1e-10))
            self.assertTrue(S.contains(h_inv(Q, G), tol=1e-10))

    def test_costs_agree(self):
        G = self.sys.G
        for _ in range(50):
            K = self.S.random(self.rng, scale=0.5)
            c = cost_k(self.sys, K)
            self.assertAlmostEqual(c, cost_q(self.sys, h_inv(K, G)), delta=1e-10 * max(1.0, c))

    def test_convex_in_q(self):
        for _ in range(50):
            Q1, Q2 = self.S.random(self.rng), self.S.random(self.rng)
            mid = cost_q(self.sys, 0.5 * (Q1 + Q2))
            self.assertLessEqual(mid, 0.5 * (cost_q(self.sys, Q1) + cost_q(self.sys, Q2)) + 1e-9)

    def test_gradients(self):
        Q = self.S.random(self.rng)
        np.testing.assert_allclose(
            cost_q_grad(self.sys, Q), fd_gradient(lambda X: cost_q(self.sys, X), Q), rtol=1e-5, atol=1e-5
        )
        K = self.S.random(self.rng, scale=0.3)
        fd = fd_gradient(lambda X: cost_k(self.sys, X), K, mask=self.S.mask)
        np.testing.assert_allclose(self.S.project(cost_k_grad(self.sys, K)), fd, rtol=1e-5, atol=1e-5)

    def test_policy_outside_pattern(self):
        K = np.ones(self.sys.policy_shape)
        with self.assertRaises(InfeasiblePolicyError):
            cost_k(self.sys, K)
        with self.assertRaises(DimensionError):
            cost_k(self.sys, np.zeros((2, 2)))


class TestSolveDistributed(unittest.TestCase):
    def test_single_step(self):
        sys = scalar_system(1)
        sol = solve_distributed(sys, SparsityPattern.causal(1, 1, 1))
        np.testing.assert_allclose(sol.K, [[-0.25, 0.0]], atol=1e-10)
        self.assertAlmostEqual(sol.cost, 4.75, places=10)
        self.assertAlmostEqual(sol.open_loop_cost, 5.0, places=12)

    def test_chain_matches_dynamic_programming(self):
        sys = load_fixture("qi_chain")
        S = SparsityPattern.causal(2, 1, 1)
        sol = solve_distributed(sys, S)
        self.assertFalse(sol.rank_deficient)
        self.assertAlmostEqual(sol.cost, oracles.finite_horizon_lqg(sys), delta=1e-6)
        self.assertAlmostEqual(sol.cost, 7.85, delta=1e-6)
        self.assertAlmostEqual(cost_k(sys, sol.K), sol.cost, delta=1e-9)

    def test_chain_matches_brute_force(self):
        sys = load_fixture("qi_chain")
        S = SparsityPattern.causal(2, 1, 1)
        sol = solve_distributed(sys, S)
        _, best = oracles.brute_force_pattern(lambda q: cost_k(sys, S.from_coordinates(q)), S.dim)
        self.assertAlmostEqual(sol.cost, best, delta=1e-6)

    def test_empty_pattern_is_open_loop(self):
        sys = load_fixture("qi_chain")
        sol = solve_distributed(sys, SparsityPattern.empty(2, 1, 1))
        self.assertEqual(sol.cost, sol.open_loop_cost)
        np.testing.assert_array_equal(sol.K, 0.0)

    def test_non_qi_pattern(self):
        sys = load_fixture("qi_chain")
        with self.assertRaises(QIError):
            solve_distributed(sys, SparsityPattern.memoryless(2, 1, 1))
        with self.assertRaises(DimensionError):
            solve_distributed(sys, SparsityPattern.causal(3, 1, 1))

    def test_global_optimality(self):
        rng = np.random.default_rng(5)
        for S_of in (
            lambda s: SparsityPattern.causal(s.horizon, s.m, s.p),
            lambda s: SparsityPattern.delayed(s.horizon, s.m, s.p, delay=1, local=np.zeros((s.m, s.p))),
        ):
            sys = random_system(rng)
            S = S_of(sys)
            sol = solve_distributed(sys, S)
            self.assertLessEqual(sol.gradient_norm, 1e-8 * max(1.0, sol.cost))
            self.assertLessEqual(projected_gradient_norm(sys, sol.K, S), 1e-8 * max(1.0, sol.cost))
            self.assertLessEqual(sol.cost, sol.open_loop_cost + 1e-9)
            for _ in range(100):
                K = sol.K + S.random(rng, scale=1e-3)
                self.assertGreaterEqual(cost_k(sys, K, S), sol.cost - 1e-9)

    def test_centralized_matches_dynamic_programming(self):
        rng = np.random.default_rng(6)
        for _ in range(5):
            sys = random_system(rng, horizon=3, n=2, m=1, p=1)
            sol = solve_distributed(sys, SparsityPattern.causal(3, 1, 1))
            dp = oracles.finite_horizon_lqg(sys)
            self.assertAlmostEqual(sol.cost, dp, delta=1e-6 * max(1.0, dp))

    def test_rank_deficient_costs(self):
        sys = StackedSystem.build(
            A=1.0, B=1.0, C=1.0, horizon=2, Sigma_w=1.0, Sigma_v=0.0, M=1.0, R=0.0, Sigma_delta0=0.0
        )
        sol = solve_distributed(sys, SparsityPattern.causal(2, 1, 1))
        self.assertTrue(np.isfinite(sol.cost))
        self.assertLessEqual(sol.cost, sol.open_loop_cost + 1e-9)


if __name__ == "__main__":
    unittest.main()

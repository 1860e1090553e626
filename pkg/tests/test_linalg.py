import unittest
from unittest import mock

import numpy as np
import scipy.linalg as la
from hypothesis import given, settings
from hypothesis import strategies as st

from ecl_control.errors import DimensionError, NotHurwitzError
from ecl_control.linalg import riccati
from ecl_control.linalg import (
    Definiteness,
    eig_real_parts,
    is_controllable,
    is_hurwitz,
    is_observable,
    lqr_gain,
    lyapunov_residual,
    psd_sqrt,
    riccati_residual,
    schur_psd_check,
    solve_lyapunov_ct,
    solve_riccati_ct,
)
from tests import oracles


class TestSpectral(unittest.TestCase):
    def test_eig_real_parts(self):
        np.testing.assert_allclose(eig_real_parts([[-2, 0], [0, 1]]), [-2, 1])
        np.testing.assert_allclose(eig_real_parts([[0, 1], [-1, 0]]), [0, 0], atol=1e-14)
        # det = -7, trace = -2
        parts = eig_real_parts([[1, -2], [-2, -3]])
        np.testing.assert_allclose(parts, [-1 - np.sqrt(8), -1 + np.sqrt(8)])
        self.assertGreater(parts[-1], 0)

    def test_non_square(self):
        with self.assertRaises(DimensionError):
            eig_real_parts(np.ones((2, 3)))
        # also a ValueError for callers that catch builtins
        with self.assertRaises(ValueError):
            is_hurwitz(np.ones((3, 2)))

    def test_is_hurwitz(self):
        self.assertTrue(is_hurwitz(-np.eye(2)))
        self.assertFalse(is_hurwitz([[0, 1], [-1, 0]]))
        self.assertFalse(is_hurwitz([[-2, 0], [0, 1]]))
        self.assertTrue(is_hurwitz(-np.eye(2), margin=0.5))
        self.assertFalse(is_hurwitz(-np.eye(2), margin=1.0))

    def test_definiteness(self):
        self.assertEqual(schur_psd_check(np.eye(2)), Definiteness.PD)
        self.assertEqual(schur_psd_check([[1, 1], [1, 1]]), Definiteness.PSD)
        self.assertEqual(schur_psd_check([[1, 2], [2, 1]]), Definiteness.INDEFINITE)

    def test_psd_sqrt(self):
        M = np.array([[4.0, 2.0], [2.0, 3.0]])
        S = psd_sqrt(M)
        np.testing.assert_allclose(S @ S, M, atol=1e-12)
        np.testing.assert_allclose(S, S.T)
        # rank one input keeps its range
        v = np.array([[1.0], [2.0]])
        S = psd_sqrt(v @ v.T)
        np.testing.assert_allclose(S @ S, v @ v.T, atol=1e-12)

    def test_rank_conditions(self):
        A = np.diag([-2.0, 1.0])
        self.assertFalse(is_controllable(A, [[0.0], [1.0]]))
        self.assertTrue(is_controllable([[0, 1], [0, 0]], [[0], [1]]))
        self.assertTrue(is_observable([[1, 0]], [[0, 1], [0, 0]]))
        self.assertFalse(is_observable([[0, 1]], [[0, 1], [0, 0]]))


class TestLyapunov(unittest.TestCase):
    def test_scalar(self):
        np.testing.assert_allclose(solve_lyapunov_ct([[-1.0]], [[1.0]]), [[0.5]])

    def test_two_state_gramian(self):
        # A + BK for A = diag(-2, 1), B = [0; 1], K = [1, -2]
        Acl = np.array([[-2.0, 0.0], [1.0, -1.0]])
        X = solve_lyapunov_ct(Acl, 4 * np.eye(2))
        np.testing.assert_allclose(X, np.array([[3, 1], [1, 7]]) / 3, atol=1e-12)

    def test_zero_rhs(self):
        np.testing.assert_array_equal(solve_lyapunov_ct(-np.eye(3), np.zeros((3, 3))), np.zeros((3, 3)))

    def test_not_hurwitz(self):
        with self.assertRaisesRegex(NotHurwitzError, "no unique"):
            solve_lyapunov_ct(np.diag([-1.0, 1.0]), np.eye(2))

    def test_methods_agree(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            A = oracles.random_hurwitz(rng, 5)
            Q = oracles.random_psd(rng, 5)
            X1 = solve_lyapunov_ct(A, Q, method="kronecker")
            X2 = solve_lyapunov_ct(A, Q, method="bartels_stewart")
            np.testing.assert_allclose(X1, X2, rtol=1e-8, atol=1e-10)

    def test_large_falls_back(self):
        rng = np.random.default_rng(1)
        A = oracles.random_hurwitz(rng, 8)
        Q = np.eye(8)
        with self.assertLogs("ecl_control.linalg.lyapunov", level="INFO"):
            X = solve_lyapunov_ct(A, Q, kronecker_max_dim=4)
        self.assertLess(lyapunov_residual(A, X, Q), 1e-8)

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(1, 5))
    def test_symmetric_psd(self, seed, n):
        rng = np.random.default_rng(seed)
        A = oracles.random_hurwitz(rng, n)
        Q = oracles.random_psd(rng, n)
        X = solve_lyapunov_ct(A, Q)
        np.testing.assert_array_equal(X, X.T)
        self.assertGreaterEqual(la.eigvalsh(X)[0], -1e-9 * max(1.0, np.abs(X).max()))
        self.assertLess(lyapunov_residual(A, X, Q), 1e-8 * (1 + np.linalg.norm(X)))


class TestRiccati(unittest.TestCase):
    def test_scalar(self):
        P = solve_riccati_ct([[1.0]], [[1.0]], [[1.0]], [[1.0]])
        np.testing.assert_allclose(P, [[1 + np.sqrt(2)]], rtol=1e-12)

    def test_two_state(self):
        P = solve_riccati_ct(np.diag([-2.0, 1.0]), [[0.0], [1.0]], np.eye(2), [[1.0]])
        np.testing.assert_allclose(P, np.diag([0.25, 1 + np.sqrt(2)]), atol=1e-12)
        K = lqr_gain(np.diag([-2.0, 1.0]), [[0.0], [1.0]], np.eye(2), [[1.0]])
        np.testing.assert_allclose(K, [[0.0, -1 - np.sqrt(2)]], atol=1e-12)

    def test_zero_weight(self):
        P = solve_riccati_ct(-np.eye(2), np.eye(2), np.zeros((2, 2)), np.eye(2))
        np.testing.assert_allclose(P, np.zeros((2, 2)), atol=1e-12)

    def test_dimension_errors(self):
        with self.assertRaises(DimensionError):
            solve_riccati_ct(np.eye(2), np.ones((3, 1)), np.eye(2), [[1.0]])
        with self.assertRaises(DimensionError):
            solve_riccati_ct(np.eye(2), np.ones((2, 1)), np.eye(2), [[-1.0]])

    def test_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, n + 1))
            A = rng.standard_normal((n, n))
            B = rng.standard_normal((n, m))
            Q = oracles.random_psd(rng, n) + 0.1 * np.eye(n)
            R = oracles.random_psd(rng, m) + 0.1 * np.eye(m)
            P = solve_riccati_ct(A, B, Q, R)
            self.assertLessEqual(riccati_residual(A, B, Q, R, P), 1e-9)
            K = la.solve(R, B.T @ P)
            self.assertTrue(is_hurwitz(A - B @ K))
            np.testing.assert_allclose(P, la.solve_continuous_are(A, B, Q, R), rtol=1e-6, atol=1e-8)

    def test_schur_failure_falls_back_to_scipy(self):
        A, B = np.diag([-2.0, 1.0]), np.array([[0.0], [1.0]])
        # an empty stable subspace from the ordered Schur step
        failed = (np.eye(4), np.eye(4), 0)
        with mock.patch.object(riccati.la, "schur", return_value=failed):
            with self.assertLogs("ecl_control.linalg.riccati", level="INFO") as logs:
                P = solve_riccati_ct(A, B, np.eye(2), [[1.0]])
        self.assertIn("solve_continuous_are", logs.output[0])
        np.testing.assert_allclose(P, np.diag([0.25, 1 + np.sqrt(2)]), atol=1e-12)


if __name__ == "__main__":
    unittest.main()

import unittest

import numpy as np

from ecl_control.errors import DimensionError, PoleError, PreconditionError
from ecl_control.linalg import is_hurwitz
from ecl_control.plant import (
    DynamicPolicy,
    OutputPlant,
    Plant,
    StaticGain,
    assemble_closed_loop,
    closed_loop,
    gain_matrix,
    transfer_at,
    tzw_at,
)
from tests import oracles


def scalar_output_plant():
    return OutputPlant(A=[[1.0]], B2=[[1.0]], C2=[[1.0]], W=[[1.0]], V=[[1.0]], Q=[[1.0]], R=[[1.0]])


def example_plant():
    return Plant(A=[[-1.0]], B=[[1.0]], Bw=[[1.0]], Q=[[0.1]], R=[[1.0]])


class TestPlant(unittest.TestCase):
    def test_dimensions(self):
        p = Plant(A=np.diag([-2.0, 1.0]), B=[[0.0], [1.0]], Bw=2 * np.eye(2), Q=np.eye(2), R=[[1.0]])
        self.assertEqual((p.n, p.m, p.nw), (2, 1, 2))
        np.testing.assert_allclose(p.W, 4 * np.eye(2))
        with self.assertRaises(DimensionError):
            Plant(A=np.eye(2), B=np.ones((3, 1)), Bw=np.eye(2), Q=np.eye(2), R=[[1.0]])
        with self.assertRaises(DimensionError):
            Plant(A=np.ones((2, 3)), B=np.ones((2, 1)), Bw=np.eye(2), Q=np.eye(2), R=[[1.0]])

    def test_weights(self):
        with self.assertRaisesRegex(PreconditionError, "positive definite"):
            Plant(A=[[1.0]], B=[[1.0]], Bw=[[1.0]], Q=[[1.0]], R=[[0.0]])
        with self.assertRaisesRegex(PreconditionError, "symmetric"):
            Plant(A=np.eye(2), B=np.eye(2), Bw=np.eye(2), Q=[[1.0, 1.0], [0.0, 1.0]], R=np.eye(2))
        with self.assertRaises(PreconditionError):
            OutputPlant(A=[[1.0]], B2=[[1.0]], C2=[[1.0]], W=[[1.0]], V=[[-1.0]], Q=[[1.0]], R=[[1.0]])

    def test_frozen(self):
        p = example_plant()
        with self.assertRaises(ValueError):
            p.A[0, 0] = 3.0

    def test_from_weights(self):
        p = Plant.from_weights(A=np.eye(2), B=np.eye(2), W=np.diag([4.0, 9.0]), Q=np.eye(2), R=np.eye(2))
        np.testing.assert_allclose(p.Bw, np.diag([2.0, 3.0]), atol=1e-12)

    def test_generalized_plant(self):
        p = scalar_output_plant()
        np.testing.assert_allclose(p.B1, [[1.0, 0.0]])
        np.testing.assert_allclose(p.C1, [[1.0], [0.0]])
        np.testing.assert_allclose(p.D12, [[0.0], [1.0]])
        np.testing.assert_allclose(p.D21, [[0.0, 1.0]])
        p.check_assumptions()

    def test_assumptions(self):
        p = OutputPlant(A=-np.eye(2), B2=[[1.0], [0.0]], C2=[[1.0, 0.0]], W=np.eye(2), V=[[1.0]], Q=np.eye(2), R=[[1.0]])
        self.assertFalse(p.flags()["controllable"])
        with self.assertRaisesRegex(PreconditionError, "controllable"):
            p.check_assumptions()


class TestPolicies(unittest.TestCase):
    def test_packed(self):
        K = DynamicPolicy(DK=[[1.0]], CK=[[2.0, 3.0]], BK=[[4.0], [5.0]], AK=[[6.0, 7.0], [8.0, 9.0]])
        np.testing.assert_array_equal(K.packed, [[1, 2, 3], [4, 6, 7], [5, 8, 9]])
        K2 = DynamicPolicy.from_packed(K.packed, n=2, m=1, p=1)
        np.testing.assert_array_equal(K2.AK, K.AK)
        self.assertFalse(K.strictly_proper)
        self.assertTrue(DynamicPolicy.zeros(2, 1, 1).strictly_proper)
        with self.assertRaises(DimensionError):
            DynamicPolicy.from_packed(np.zeros((2, 2)), n=2, m=1, p=1)
        with self.assertRaises(DimensionError):
            DynamicPolicy(DK=[[0.0]], CK=[[1.0]], BK=[[1.0], [1.0]], AK=[[1.0]])

    def test_similarity(self):
        rng = np.random.default_rng(3)
        K = DynamicPolicy.from_packed(rng.standard_normal((3, 3)), n=2, m=1, p=1)
        S = rng.standard_normal((2, 2)) + 2 * np.eye(2)
        KS = K.similarity(S)
        # the transfer function of the policy is unchanged
        for s in (0.3j, 1.0 + 2.0j):
            np.testing.assert_allclose(
                transfer_at(KS.AK, KS.BK, KS.CK, KS.DK, s), transfer_at(K.AK, K.BK, K.CK, K.DK, s), atol=1e-10
            )

    def test_gain_matrix(self):
        np.testing.assert_array_equal(gain_matrix(StaticGain([[1.0, 2.0]])), [[1.0, 2.0]])
        np.testing.assert_array_equal(gain_matrix(-0.5), [[-0.5]])


class TestClosedLoop(unittest.TestCase):
    def test_zero_policy(self):
        cl = assemble_closed_loop(scalar_output_plant(), DynamicPolicy.zeros(1, 1, 1))
        np.testing.assert_array_equal(cl.Acl, [[1.0, 0.0], [0.0, 0.0]])
        cl = assemble_closed_loop(scalar_output_plant(), DynamicPolicy(DK=[[0.0]], CK=[[0.0]], BK=[[0.0]], AK=[[-1.0]]))
        np.testing.assert_array_equal(cl.Acl, np.diag([1.0, -1.0]))
        np.testing.assert_array_equal(cl.Dcl, np.zeros((2, 2)))

    def test_observer_based_policy(self):
        p = scalar_output_plant()
        _, (DK, CK, BK, AK) = oracles.lqg_two_riccati(p.A, p.B2, p.C2, p.W, p.V, p.Q, p.R)
        r = 1 + np.sqrt(2)
        np.testing.assert_allclose(AK, [[1 - 2 * r]])
        np.testing.assert_allclose(BK, [[r]])
        np.testing.assert_allclose(CK, [[-r]])
        cl = assemble_closed_loop(p, DynamicPolicy(DK=DK, CK=CK, BK=BK, AK=AK))
        self.assertTrue(is_hurwitz(cl.Acl))

    def test_superposition(self):
        rng = np.random.default_rng(11)
        p = OutputPlant(
            A=rng.standard_normal((2, 2)),
            B2=rng.standard_normal((2, 1)),
            C2=rng.standard_normal((1, 2)),
            W=np.eye(2),
            V=[[1.0]],
            Q=np.eye(2),
            R=[[1.0]],
        )
        base = assemble_closed_loop(p, DynamicPolicy.zeros(2, 1, 1))
        for _ in range(10):
            K1, K2 = (rng.standard_normal((3, 3)) for _ in range(2))
            K1[0, 0] = K2[0, 0] = 0.0
            a, b = rng.standard_normal(2)
            mix = assemble_closed_loop(p, DynamicPolicy.from_packed(a * K1 + b * K2, 2, 1, 1))
            c1 = assemble_closed_loop(p, DynamicPolicy.from_packed(K1, 2, 1, 1))
            c2 = assemble_closed_loop(p, DynamicPolicy.from_packed(K2, 2, 1, 1))
            for attr in ("Acl", "Bcl", "Ccl"):
                lhs = getattr(mix, attr) - getattr(base, attr)
                rhs = a * (getattr(c1, attr) - getattr(base, attr)) + b * (getattr(c2, attr) - getattr(base, attr))
                np.testing.assert_allclose(lhs, rhs, atol=1e-12)
            np.testing.assert_array_equal(mix.Dcl, np.zeros_like(mix.Dcl))

    def test_policy_kind_mismatch(self):
        with self.assertRaises(DimensionError):
            closed_loop(scalar_output_plant(), StaticGain([[1.0]]))
        with self.assertRaises(DimensionError):
            closed_loop(example_plant(), DynamicPolicy.zeros(1, 1, 1))
        with self.assertRaises(DimensionError):
            closed_loop(example_plant(), StaticGain([[1.0, 2.0]]))


class TestFrequencyResponse(unittest.TestCase):
    def test_static_gain_at_dc(self):
        T = tzw_at(example_plant(), StaticGain([[-0.1]]), 0.0)
        np.testing.assert_allclose(T, np.array([[np.sqrt(0.1)], [-0.1]]) / 1.1, atol=1e-14)
        self.assertAlmostEqual(np.linalg.svd(T, compute_uv=False)[0], np.sqrt(0.11) / 1.1, places=12)

    def test_infinity(self):
        D = np.array([[0.5]])
        np.testing.assert_array_equal(transfer_at([[-1.0]], [[1.0]], [[1.0]], D, np.inf), D)

    def test_scalar(self):
        G = transfer_at(np.array([[-1.0]]), np.array([[1.0]]), np.array([[1.0]]), np.zeros((1, 1)), 1j)
        np.testing.assert_allclose(G, [[1 / (1j + 1)]])
        self.assertAlmostEqual(abs(G[0, 0]), 1 / np.sqrt(2))

    def test_pole(self):
        with self.assertRaises(PoleError):
            transfer_at(np.array([[-1.0]]), np.eye(1), np.eye(1), np.zeros((1, 1)), -1.0)


if __name__ == "__main__":
    unittest.main()

import unittest

import numpy as np

from ecl_control.errors import BracketError, NotHurwitzError
from ecl_control.norms import (
    HinfResult,
    bounded_real_certificate,
    bounded_real_matrix,
    certify_norm,
    frequency_grid_max,
    h2_certificate_violation,
    h2_lmi_certificate,
    h2_norm,
    h2_norm_sq,
    h2_norm_sq_dual,
    hinf_norm,
    hinf_norm_with_peaks,
    nsd_violation,
    peak_data,
)
from tests import oracles


def two_state_loop():
    # A + BK, Bw and [Q^1/2; R^1/2 K] for the two-state plant at K = [1, -2]
    K = np.array([[1.0, -2.0]])
    A = np.array([[-2.0, 0.0], [1.0, -1.0]])
    return A, 2 * np.eye(2), np.vstack([np.eye(2), K])


def sf_loop(a, b, bw, q, r, k):
    return np.array([[a + b * k]]), np.array([[bw]]), np.array([[np.sqrt(q)], [np.sqrt(r) * k]])


class TestH2(unittest.TestCase):
    def test_scalar(self):
        self.assertAlmostEqual(h2_norm_sq([[-1.0]], [[1.0]], [[1.0]]), 0.5, places=14)

    def test_two_state(self):
        self.assertAlmostEqual(h2_norm_sq(*two_state_loop()), 37 / 3, places=10)

    def test_zero_output(self):
        self.assertEqual(h2_norm([[-1.0]], [[1.0]], [[0.0]]), 0.0)

    def test_not_hurwitz(self):
        with self.assertRaises(NotHurwitzError):
            h2_norm_sq([[1.0]], [[1.0]], [[1.0]])

    def test_gramian_duality(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n, m, p = (int(v) for v in rng.integers(1, 6, size=3))
            A = oracles.random_hurwitz(rng, n)
            B = rng.standard_normal((n, m))
            C = rng.standard_normal((p, n))
            primal, dual = h2_norm_sq(A, B, C), h2_norm_sq_dual(A, B, C)
            self.assertLessEqual(abs(primal - dual), 1e-9 * max(1.0, primal))


class TestHinf(unittest.TestCase):
    def test_static_gain_example(self):
        A, B, C = sf_loop(-1.0, 1.0, 1.0, 0.1, 1.0, -0.1)
        self.assertAlmostEqual(hinf_norm(A, B, C), np.sqrt(0.11) / 1.1, places=7)
        self.assertAlmostEqual(hinf_norm(A, B, C), 0.3015, delta=1e-4)

    def test_noncoercive_closed_form(self):
        A, B, C = sf_loop(1.0, -1.0, 1.0, 1.0, 1.0, 2.0)
        self.assertAlmostEqual(hinf_norm(A, B, C), np.sqrt(5), places=6)

    def test_peak_at_zero(self):
        res = hinf_norm_with_peaks([[-1.0]], [[1.0]], [[1.0]])
        self.assertAlmostEqual(res.norm, 1.0, places=7)
        self.assertLessEqual(res.lower, res.norm)
        self.assertTrue(res.peaks)
        self.assertTrue(all(w < 1e-5 for w in res.peaks))

    def test_resonant_peak(self):
        # lightly damped oscillator peaks near its natural frequency
        zeta, wn = 0.05, 2.0
        A = np.array([[0.0, 1.0], [-wn ** 2, -2 * zeta * wn]])
        B, C = np.array([[0.0], [1.0]]), np.array([[1.0, 0.0]])
        res = hinf_norm_with_peaks(A, B, C)
        self.assertAlmostEqual(res.peaks[0], wn * np.sqrt(1 - 2 * zeta ** 2), places=4)
        pd = peak_data(A, B, C, np.zeros((1, 1)), res.peaks[0])
        self.assertAlmostEqual(pd.sigma, res.norm, delta=1e-6 * res.norm)
        self.assertEqual(pd.multiplicity, 1)

    def test_feedthrough_only(self):
        res = hinf_norm_with_peaks(None, None, None, D=[[0.0, 3.0]])
        self.assertEqual(res.norm, 3.0)
        self.assertEqual(res.peaks, [np.inf])

    def test_not_hurwitz(self):
        with self.assertRaises(NotHurwitzError):
            hinf_norm([[0.5]], [[1.0]], [[1.0]])

    def test_grid_agreement(self):
        rng = np.random.default_rng(17)
        rel_tol = 1e-8
        for i in range(50):
            n = int(rng.integers(1, 7))
            m, p = (int(v) for v in rng.integers(1, 4, size=2))
            A = oracles.random_hurwitz(rng, n, margin=0.5)
            B = rng.standard_normal((n, m))
            C = rng.standard_normal((p, n))
            D = rng.standard_normal((p, m)) if i % 3 == 0 else np.zeros((p, m))
            norm = hinf_norm(A, B, C, D, rel_tol=rel_tol, certify=False)
            grid = frequency_grid_max(A, B, C, D)
            self.assertLessEqual(grid, norm * (1 + 1e-12))
            self.assertLessEqual(abs(norm - oracles.hinf_grid(A, B, C, D)), 1e-6 * norm)

    def test_certified_on_random_systems(self):
        rng = np.random.default_rng(19)
        rel_tol = 1e-4
        for i in range(20):
            n = int(rng.integers(1, 5))
            m, p = (int(v) for v in rng.integers(1, 3, size=2))
            A = oracles.random_hurwitz(rng, n, margin=0.5)
            B = rng.standard_normal((n, m))
            C = rng.standard_normal((p, n))
            D = 0.5 * rng.standard_normal((p, m)) if i % 4 == 0 else np.zeros((p, m))
            norm = hinf_norm(A, B, C, D, rel_tol=rel_tol)
            self.assertIsNotNone(bounded_real_certificate(A, B, C, D, norm * (1 + rel_tol), strict=True))
            self.assertIsNone(bounded_real_certificate(A, B, C, D, norm * (1 - 1e-2), strict=True))

    def test_uncertified_level_rejected(self):
        A, B, C = sf_loop(-1.0, 1.0, 1.0, 0.1, 1.0, -0.1)
        D = np.zeros((2, 1))
        res = hinf_norm_with_peaks(A, B, C, D)
        self.assertIsNone(res.certified_level)
        certify_norm(A, B, C, D, res)
        self.assertGreater(res.certified_level, res.norm)
        with self.assertRaises(BracketError):
            certify_norm(A, B, C, D, HinfResult(norm=0.9 * res.norm, lower=0.0))


class TestCertificates(unittest.TestCase):
    def test_h2_levels(self):
        A, B, C = two_state_loop()
        norm = h2_norm(A, B, C)
        cert = h2_lmi_certificate(A, B, C, 1.01 * norm, strict=True)
        self.assertIsNotNone(cert)
        self.assertLessEqual(h2_certificate_violation(A, B, C, 1.01 * norm, *cert), 1e-7)
        self.assertIsNone(h2_lmi_certificate(A, B, C, 0.99 * norm))
        # the Gramian construction attains the norm itself
        cert = h2_lmi_certificate(A, B, C, norm)
        self.assertIsNotNone(cert)
        P, Gamma = cert
        self.assertAlmostEqual(np.trace(Gamma), norm, delta=1e-9 * norm)
        self.assertIsNone(h2_lmi_certificate(A, B, C, 0.0))

    def test_bounded_real(self):
        A, B, C = sf_loop(-1.0, 1.0, 1.0, 0.1, 1.0, -0.1)
        D = np.zeros((2, 1))
        P = bounded_real_certificate(A, B, C, D, 0.31, strict=True)
        self.assertIsNotNone(P)
        self.assertLessEqual(nsd_violation(bounded_real_matrix(A, B, C, D, 0.31, P)), 1e-7)
        self.assertIsNone(bounded_real_certificate(A, B, C, D, 0.0))
        self.assertIsNone(bounded_real_certificate(A, B, C, D, 0.29))

    def test_bounded_real_monotone(self):
        A, B, C = sf_loop(-1.0, 1.0, 1.0, 0.1, 1.0, -0.1)
        D = np.zeros((2, 1))
        for gamma in (0.31, 0.5, 2.0, 10.0):
            self.assertIsNotNone(bounded_real_certificate(A, B, C, D, gamma))

    def test_bounded_real_large_gain(self):
        A, B, C = sf_loop(1.0, -1.0, 1.0, 1.0, 1.0, 1e4)
        self.assertLess(hinf_norm(A, B, C, certify=False), 1.001)
        self.assertIsNotNone(bounded_real_certificate(A, B, C, np.zeros((2, 1)), 1.001))


if __name__ == "__main__":
    unittest.main()

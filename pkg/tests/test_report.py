import json
import unittest

import numpy as np

from ecl_control.harness import CaseReport, Expected, Report, check, emit_report, report_dict


def sample_report():
    ok = check(Expected("gamma", 1.0, tol=1e-6, provenance="SOURCE"), 1.0 + 1e-8)
    bad = check(Expected("status", "OPTIMAL", mode="eq"), "INFEASIBLE")
    return Report(
        cases=[
            CaseReport("a_pass", passed=True, checks=[ok], values={"z": 2.0, "a": float("inf")}, seconds=0.5),
            CaseReport("b_fail", passed=False, checks=[bad], error=None),
        ]
    )


class TestCheck(unittest.TestCase):
    def test_absolute(self):
        self.assertTrue(check(Expected("x", 1.0, tol=1e-6), 1.0 + 5e-7).passed)
        self.assertFalse(check(Expected("x", 1.0, tol=1e-6), 1.0 + 2e-6).passed)
        res = check(Expected("x", [1.0, 2.0], tol=1e-3), np.array([1.0, 2.002]))
        self.assertFalse(res.passed)
        self.assertAlmostEqual(res.residual, 2e-3)

    def test_relative(self):
        self.assertTrue(check(Expected("x", 1e6, tol=1e-6, mode="rel"), 1e6 + 0.5).passed)
        self.assertFalse(check(Expected("x", 1e-6, tol=1e-6, mode="rel"), 2e-6).passed)

    def test_one_sided(self):
        self.assertTrue(check(Expected("x", 5.0, tol=1e-9, mode="le"), 4.0).passed)
        self.assertFalse(check(Expected("x", 5.0, tol=1e-9, mode="le"), 5.1).passed)
        self.assertTrue(check(Expected("x", 5.0, tol=0.2, mode="ge"), 4.9).passed)
        self.assertFalse(check(Expected("x", 5.0, mode="ge"), 4.9).passed)

    def test_exact(self):
        self.assertTrue(check(Expected("status", "OPTIMAL", mode="eq"), "OPTIMAL").passed)
        self.assertTrue(check(Expected("flag", True, mode="eq"), True).passed)

    def test_bad_measurements_fail(self):
        self.assertFalse(check(Expected("x", 1.0), float("nan")).passed)
        self.assertFalse(check(Expected("x", 1.0), "one").passed)
        self.assertFalse(check(Expected("x", [1.0, 2.0]), [1.0]).passed)


class TestEmit(unittest.TestCase):
    def test_summary(self):
        report = sample_report()
        self.assertFalse(report.passed)
        self.assertEqual(dict(report.summary()), {"cases": 2, "passed": 1, "failed": 1})
        self.assertTrue(Report().passed)

    def test_json(self):
        doc = json.loads(emit_report(sample_report()).decode("utf-8"))
        self.assertEqual(list(doc), ["summary", "passed", "cases"])
        first = doc["cases"][0]
        self.assertEqual(first["id"], "a_pass")
        self.assertEqual(list(first["values"]), ["a", "z"])
        self.assertEqual(first["values"]["a"], "inf")
        self.assertEqual(first["checks"][0]["provenance"], "SOURCE")
        self.assertNotIn("seconds", first)

    def test_deterministic_without_timings(self):
        self.assertEqual(emit_report(sample_report()), emit_report(sample_report()))
        d = report_dict(sample_report(), include_timings=True)
        self.assertEqual(d["cases"][0]["seconds"], 0.5)

    def test_text(self):
        text = emit_report(sample_report(), fmt="text").decode("utf-8").splitlines()
        self.assertEqual(text[0], "PASS a_pass")
        self.assertTrue(text[1].startswith("  [ok] gamma = "))
        self.assertEqual(text[2], "FAIL b_fail")
        self.assertEqual(text[-1], "2 cases | 1 passed | 1 failed")

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report(sample_report(), fmt="yaml")


if __name__ == "__main__":
    unittest.main()

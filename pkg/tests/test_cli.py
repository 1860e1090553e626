import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np

from ecl_cli.ecl import cli_main
from ecl_control.harness import dumps, load_json
from ecl_control.fixtures import fixture_path

SQRT2 = np.sqrt(2.0)


def run(*args):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli_main(list(args) + ["--no-progress-bar"])
    return code, out.getvalue()


class TestCli(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, doc):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(dumps(doc))
        return path

    def test_usage_errors_exit_2(self):
        for args in (["frobnicate"], ["verify"], ["solve", "--problem", "mpc"], ["certify", "--problem", "lqr"]):
            with self.assertRaises(SystemExit) as ctx, contextlib.redirect_stderr(io.StringIO()):
                cli_main(args)
            self.assertEqual(ctx.exception.code, 2, args)

    def test_verify(self):
        code, out = run("verify", "--case", "B1-lqr,academic")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertTrue(doc["passed"])
        self.assertEqual([c["id"] for c in doc["cases"]], ["B1-lqr", "academic"])
        self.assertNotIn("seconds", doc["cases"][0])

    def test_verify_text(self):
        code, out = run("verify", "--case", "qi-triangular", "--report-format", "text")
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[-1], "1 cases | 1 passed | 0 failed")

    def test_verify_unknown_case(self):
        code, out = run("verify", "--case", "no-such-case")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_solve(self):
        code, out = run("solve", "--problem", "lqr")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual(doc["status"], "OPTIMAL")
        self.assertAlmostEqual(doc["gamma"], 5.0 + 4.0 * SQRT2, delta=1e-5)

    def test_solve_to_file(self):
        path = os.path.join(self.tmp, "result.json")
        code, out = run("solve", "--problem", "qi", "--out", path)
        self.assertEqual(code, 0)
        self.assertEqual(out, "")
        self.assertAlmostEqual(load_json(path)["gamma"], 7.85, delta=1e-6)

    def test_solve_missing_plant(self):
        code, _ = run("solve", "--problem", "lqr", "--plant", os.path.join(self.tmp, "missing.json"))
        self.assertEqual(code, 2)

    def test_solve_non_qi_pattern(self):
        doc = load_json(fixture_path("qi_chain"))
        doc["pattern"] = "memoryless"
        code, _ = run("solve", "--problem", "qi", "--plant", self.write("plant.json", doc))
        self.assertEqual(code, 3)

    def test_landscape(self):
        code, out = run("landscape", "--problem", "lqr", "--grid", "k1=-1:1:3,k2=-3:-1:3")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "coord1,coord2,cost")
        self.assertEqual(len(lines), 10)
        # k2 = -1 is on the boundary of the stabilizing set
        self.assertEqual(lines[3], "-1,-1,inf")

    def test_landscape_bad_grid(self):
        code, out = run("landscape", "--problem", "lqr", "--grid", "k1=-1:1")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")

    def test_certify(self):
        optimal = self.write("optimal.json", {"kind": "static", "K": [[0.0, -1.0 - SQRT2]]})
        code, out = run("certify", "--problem", "lqr", "--policy", optimal)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["verdict"], "GLOBALLY_OPTIMAL")

        start = self.write("start.json", {"kind": "static", "K": [[1.0, -2.0]]})
        code, out = run("certify", "--problem", "lqr", "--policy", start)
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["verdict"], "NOT_STATIONARY")

    def test_certify_wrong_policy_kind(self):
        policy = self.write("policy.json", {"kind": "dynamic", "DK": 0, "CK": 0, "BK": 0, "AK": -1})
        code, _ = run("certify", "--problem", "lqr", "--policy", policy)
        self.assertEqual(code, 2)


if __name__ == "__main__":
    unittest.main()

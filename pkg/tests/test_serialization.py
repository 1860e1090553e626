import os
import tempfile
import unittest

import numpy as np

from ecl_control.errors import SchemaError
from ecl_control.fixtures import fixture_names, fixture_path, load_fixture
from ecl_control.harness import (
    dumps,
    emit_plant,
    emit_policy,
    load_json,
    load_plant,
    load_policy,
    loads,
    parse_matrix,
    parse_pattern,
    parse_plant,
    parse_policy,
)
from ecl_control.plant import DynamicPolicy, OutputPlant, Plant, StaticGain
from ecl_control.qi_distributed import StackedSystem


class TestParseMatrix(unittest.TestCase):
    def test_forms(self):
        np.testing.assert_array_equal(parse_matrix(2, "$.x"), [[2.0]])
        np.testing.assert_array_equal(parse_matrix([1, 2], "$.x"), [[1.0], [2.0]])
        np.testing.assert_array_equal(parse_matrix([[1, 2], [3, 4]], "$.x"), [[1, 2], [3, 4]])

    def test_errors_carry_path(self):
        cases = [
            ([], "$.A"),
            ([[1, 2], [3]], "$.A[1]"),
            ([[1, "a"]], "$.A[0][1]"),
            ([[True]], "$.A[0][0]"),
            ({"x": 1}, "$.A"),
        ]
        for obj, path in cases:
            with self.assertRaises(SchemaError) as ctx:
                parse_matrix(obj, "$.A")
            self.assertEqual(ctx.exception.path, path)

    def test_non_finite(self):
        with self.assertRaises(SchemaError):
            parse_matrix([[float("inf")]], "$.A")


class TestPlantDocuments(unittest.TestCase):
    def test_fixtures_parse(self):
        kinds = {"state": Plant, "output": OutputPlant, "stacked": StackedSystem}
        for name in fixture_names():
            doc = load_json(fixture_path(name))
            plant = load_fixture(name)
            self.assertIsInstance(plant, kinds[doc["kind"]], name)

    def test_state_plant_from_noise_weight(self):
        plant = parse_plant({"kind": "state", "A": -1, "B": 1, "W": 4, "Q": 1, "R": 1})
        np.testing.assert_allclose(plant.Bw, [[2.0]])

    def test_emit_and_parse(self):
        plant = load_fixture("two_state")
        again = parse_plant(loads(dumps(emit_plant(plant))))
        for key in ("A", "B", "Bw", "Q", "R"):
            np.testing.assert_array_equal(getattr(again, key), getattr(plant, key))

    def test_emitted_key_order(self):
        doc = emit_plant(load_fixture("two_state"))
        self.assertEqual(list(doc), ["kind", "A", "B", "Bw", "Q", "R"])

    def test_schema_errors(self):
        with self.assertRaises(SchemaError) as ctx:
            parse_plant({"kind": "state", "A": -1, "B": 1, "Q": 1, "R": 1})
        self.assertEqual(ctx.exception.path, "$.W")
        with self.assertRaises(SchemaError) as ctx:
            parse_plant({"kind": "tensor"})
        self.assertEqual(ctx.exception.path, "$.kind")
        with self.assertRaises(SchemaError):
            parse_plant([1, 2])
        with self.assertRaises(SchemaError):
            parse_plant("{not json")

    def test_model_errors_become_schema_errors(self):
        # R must be positive definite
        with self.assertRaises(SchemaError) as ctx:
            parse_plant({"kind": "state", "A": -1, "B": 1, "Bw": 1, "Q": 1, "R": 0})
        self.assertEqual(ctx.exception.path, "$")
        with self.assertRaises(SchemaError):
            parse_plant({"kind": "state", "A": [[1, 0]], "B": 1, "Bw": 1, "Q": 1, "R": 1})

    def test_stacked_horizon(self):
        doc = load_json(fixture_path("qi_chain"))
        doc["horizon"] = 0
        with self.assertRaises(SchemaError) as ctx:
            parse_plant(doc)
        self.assertEqual(ctx.exception.path, "$.horizon")
        doc["horizon"] = True
        with self.assertRaises(SchemaError):
            parse_plant(doc)

    def test_stacked_per_step_blocks(self):
        doc = load_json(fixture_path("qi_chain"))
        doc["A"] = [[[1.0]], [[0.5]]]
        sys = parse_plant(doc)
        self.assertEqual(len(sys.A_blocks), 2)
        self.assertEqual(sys.A_blocks[1][0, 0], 0.5)

    def test_load_missing_file(self):
        with self.assertRaises(SchemaError):
            load_plant("/nonexistent/plant.json")
        with self.assertRaises(SchemaError):
            fixture_path("no_such_fixture")


class TestPatterns(unittest.TestCase):
    def setUp(self):
        self.sys = load_fixture("qi_chain")

    def test_named_patterns(self):
        self.assertEqual(parse_pattern("causal", self.sys).dim, 3)
        self.assertEqual(parse_pattern(None, self.sys).dim, 3)
        self.assertEqual(parse_pattern("memoryless", self.sys).dim, 2)
        self.assertEqual(parse_pattern({"delay": 1, "local": 0}, self.sys).dim, 1)

    def test_explicit_mask(self):
        S = parse_pattern([[1, 0, 0], [0, 1, 0]], self.sys)
        np.testing.assert_array_equal(S.mask, [[True, False, False], [False, True, False]])
        with self.assertRaises(SchemaError):
            parse_pattern([[1, 1, 0], [1, 1, 0]], self.sys)
        with self.assertRaises(SchemaError):
            parse_pattern([[1, 0], [1, 1]], self.sys)


class TestPolicyDocuments(unittest.TestCase):
    def test_kinds(self):
        self.assertIsInstance(parse_policy({"kind": "static", "K": [[1, -2]]}), StaticGain)
        dyn = parse_policy({"kind": "dynamic", "DK": 0, "CK": -1, "BK": 1, "AK": -2})
        self.assertIsInstance(dyn, DynamicPolicy)
        self.assertEqual(dyn.order, 1)
        K = parse_policy('{"kind": "stacked", "K": [[1, 0, 0], [1, 1, 0]]}')
        self.assertIsInstance(K, np.ndarray)

    def test_inconsistent_blocks(self):
        with self.assertRaises(SchemaError):
            parse_policy({"kind": "dynamic", "DK": 0, "CK": [[1, 2]], "BK": 1, "AK": -2})
        with self.assertRaises(SchemaError) as ctx:
            parse_policy({"kind": "dynamic", "DK": 0, "CK": 1, "AK": -2})
        self.assertEqual(ctx.exception.path, "$.BK")

    def test_file_round_trip(self):
        policy = DynamicPolicy(DK=[[0.0]], CK=[[-1.0]], BK=[[2.0]], AK=[[-3.0]])
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "policy.json")
            with open(path, "w") as f:
                f.write(dumps(emit_policy(policy)))
            again = load_policy(path)
        np.testing.assert_array_equal(again.packed, policy.packed)

    def test_dumps_numpy_values(self):
        text = dumps({"x": np.float64(1.5), "K": np.eye(2), "n": np.int64(3)})
        self.assertEqual(loads(text), {"x": 1.5, "K": [[1.0, 0.0], [0.0, 1.0]], "n": 3})


if __name__ == "__main__":
    unittest.main()

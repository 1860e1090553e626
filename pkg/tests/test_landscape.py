import io
import unittest

import numpy as np

from ecl_control.errors import NotHurwitzError, SchemaError
from ecl_control.harness import (
    GridAxis,
    feasibility_mask,
    grid_minimum,
    landscape_grid,
    parse_grid,
    read_grid,
    write_grid,
)


def bowl(a, b):
    if a + b > 2.5:
        raise NotHurwitzError("outside")
    return (a - 1.0) ** 2 + (b + 0.4) ** 2


class TestParseGrid(unittest.TestCase):
    def test_axes(self):
        ax1, ax2 = parse_grid("k1=-3:3:7, k2=0.5")
        self.assertEqual(ax1, GridAxis("k1", -3.0, 3.0, 7))
        np.testing.assert_allclose(ax1.values, [-3, -2, -1, 0, 1, 2, 3])
        self.assertEqual(ax1.step, 1.0)
        self.assertEqual(ax2.num, 1)
        np.testing.assert_array_equal(ax2.values, [0.5])

    def test_errors(self):
        for spec in (
            "",
            "k1=-3:3:7",
            "k1=-3:3:7,k2=0:1:2,k3=1",
            "k1=-3:3,k2=0:1:2",
            "k1=3:-3:7,k2=0:1:2",
            "k1=-3:3:0,k2=0:1:2",
            "k1=-3:3:x,k2=0:1:2",
            "k1=a:3:7,k2=0:1:2",
            "k1,k2=0:1:2",
            "k1=-inf:3:7,k2=0:1:2",
        ):
            with self.assertRaises(SchemaError, msg=spec):
                parse_grid(spec)


class TestLandscape(unittest.TestCase):
    def setUp(self):
        self.axes = parse_grid("a=-1:2:4,b=-1:2:4")
        self.df = landscape_grid(bowl, self.axes)

    def test_order_and_infeasible(self):
        self.assertEqual(list(self.df.columns), ["coord1", "coord2", "cost"])
        self.assertEqual(len(self.df), 16)
        np.testing.assert_array_equal(self.df["coord1"].to_numpy()[:4], [-1, -1, -1, -1])
        np.testing.assert_array_equal(self.df["coord2"].to_numpy()[:4], [-1, 0, 1, 2])
        mask = feasibility_mask(self.df, (4, 4))
        self.assertFalse(mask[3, 3])
        self.assertFalse(mask[2, 3])
        self.assertTrue(mask[2, 0])
        self.assertEqual(int((~mask).sum()), 3)

    def test_minimum(self):
        row = grid_minimum(self.df)
        self.assertEqual((row["coord1"], row["coord2"]), (1.0, 0.0))
        self.assertAlmostEqual(row["cost"], 0.16)
        with self.assertRaises(NotHurwitzError):
            grid_minimum(landscape_grid(lambda a, b: np.inf, self.axes))

    def test_csv(self):
        text = write_grid(self.df)
        lines = text.splitlines()
        self.assertEqual(lines[0], "coord1,coord2,cost")
        self.assertEqual(lines[-1], "2,2,inf")
        again = read_grid(io.StringIO(text))
        np.testing.assert_array_equal(np.isinf(again["cost"]), np.isinf(self.df["cost"]))
        np.testing.assert_allclose(again["cost"][np.isfinite(again["cost"])], self.df["cost"][np.isfinite(self.df["cost"])])

    def test_bad_columns(self):
        with self.assertRaises(SchemaError):
            read_grid(io.StringIO("x,y,cost\n0,0,1\n"))

    def test_progress_wrapper(self):
        seen = []

        def rows(values):
            for v in values:
                seen.append(v)
                yield v

        landscape_grid(bowl, self.axes, rows=rows)
        self.assertEqual(len(seen), 4)


if __name__ == "__main__":
    unittest.main()

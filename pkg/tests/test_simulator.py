"""
Tests for finite-SNR rate simulation
"""
import os
import sys
import unittest
from fractions import Fraction

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import catalog
from src.channel import FadingSpec, sample_channels
from src.errors import InvalidParameterError
from src.net_model import Node, build_problem, make_four_cell
from src.schemes import LinearScheme, Stream, four_cell_downlink_coherent, four_cell_downlink_iid
from src.simulator import estimate_dof, simulate_rates


class PointToPointTestCase(unittest.TestCase):
    def setUp(self):
        self.p = build_problem([Node("t")], [Node("r")], [("r", "t")], {"m": "t"}, {"r": {"m"}})
        self.s = LinearScheme(1, [Stream("m", np.ones((1, 1)))], name="single")

    def test_matches_capacity_formula(self):
        spec = FadingSpec(seed=5)
        table = simulate_rates(self.p, self.s, spec, [10.0], draws=1)
        h = sample_channels(self.p, 1, spec).coefficients[("r", "t")][0, 0, 0]
        expected = np.log2(1 + 10 * abs(h) ** 2)
        self.assertAlmostEqual(table.message_rate(10.0, "m"), expected, places=10)
        self.assertAlmostEqual(table.sum_rate(10.0), expected, places=10)

    def test_csv_layout(self):
        table = simulate_rates(self.p, self.s, FadingSpec(seed=1), [0.0, 10.0], draws=3)
        lines = table.to_csv().splitlines()
        self.assertEqual(lines[0], "snr_db,message_id,rate_bits_per_slot")
        self.assertEqual(len(lines), 1 + 2 * 2)
        self.assertTrue(lines[2].startswith("0,SUM,") or lines[2].startswith("0.0,SUM,"))

    def test_deterministic(self):
        a = simulate_rates(self.p, self.s, FadingSpec(seed=2), [20.0], draws=5)
        b = simulate_rates(self.p, self.s, FadingSpec(seed=2), [20.0], draws=5)
        self.assertEqual(a.to_csv(), b.to_csv())

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidParameterError):
            simulate_rates(self.p, self.s, FadingSpec(), [10.0], draws=0)
        with self.assertRaises(InvalidParameterError):
            simulate_rates(self.p, self.s, FadingSpec(), [], draws=1)
        table = simulate_rates(self.p, self.s, FadingSpec(), [10.0], draws=1)
        self.assertEqual(table.rate(10.0), table.sum_rate(10.0))
        with self.assertRaises(InvalidParameterError):
            table.rate(10.0, "ghost")
        with self.assertRaises(InvalidParameterError):
            estimate_dof(table, 10.0, 10.0)


class EmptySchemeTestCase(unittest.TestCase):
    def test_zero_rates(self):
        p = make_four_cell()
        table = simulate_rates(p, LinearScheme(1, [], name="silent"), FadingSpec(seed=0), [0.0, 40.0], draws=2)
        self.assertEqual(table.sum_rate(40.0), 0.0)
        self.assertEqual(table.message_rate(0.0, "a1"), 0.0)


class SlopeTestCase(unittest.TestCase):
    def _slope(self, p, s, tau):
        table = simulate_rates(p, s, FadingSpec(tau=tau, seed=7), [30.0, 40.0], draws=200)
        return estimate_dof(table, 30.0, 40.0)

    def test_coherent_four_cell(self):
        estimate = self._slope(make_four_cell(), four_cell_downlink_coherent(), 3)
        self.assertTrue(estimate.matches(Fraction(8, 3)), estimate.value)

    def test_iid_four_cell(self):
        estimate = self._slope(make_four_cell(), four_cell_downlink_iid(), 1)
        self.assertTrue(estimate.matches(Fraction(5, 2)), estimate.value)

    def test_linear_aligned_reuse(self):
        p = catalog.problem("linear:12")
        estimate = self._slope(p, catalog.scheme("linear:12", "aligned", p), 1)
        self.assertTrue(estimate.matches(8.0), estimate.value)

    def test_message_slope(self):
        p = make_four_cell()
        table = simulate_rates(p, four_cell_downlink_iid(), FadingSpec(seed=7), [30.0, 40.0], draws=200)
        self.assertAlmostEqual(estimate_dof(table, 30.0, 40.0, "d1").value, 0.5, delta=0.05)
        self.assertEqual(table.message_rate(40.0, "b1"), 0.0)
        self.assertEqual(list(table.pivot().index), [30.0, 40.0])


if __name__ == "__main__":
    unittest.main()

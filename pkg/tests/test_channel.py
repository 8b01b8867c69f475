"""
Tests for block-fading channel sampling
"""
import json
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.channel import FadingSpec, dump_channels, sample_channels
from src.errors import InvalidParameterError
from src.net_model import make_four_cell, make_macro_femto


class FadingSpecTestCase(unittest.TestCase):
    def test_invalid(self):
        with self.assertRaises(InvalidParameterError):
            FadingSpec(tau=0)
        with self.assertRaises(InvalidParameterError):
            FadingSpec(bounds=(0.0, 1.0))
        with self.assertRaises(InvalidParameterError):
            FadingSpec(spatial="correlated")
        with self.assertRaises(InvalidParameterError):
            FadingSpec(receiver_tau={"a1": 0})

    def test_overrides(self):
        spec = FadingSpec(tau=1, receiver_tau={"D": 3}, seed=4)
        self.assertEqual(spec.tau_for("D"), 3)
        self.assertEqual(spec.tau_for("A"), 1)
        self.assertEqual(spec.with_seed(9).receiver_tau, {"D": 3})
        self.assertEqual(spec.with_tau(2).seed, 4)


class SampleChannelsTestCase(unittest.TestCase):
    def setUp(self):
        self.p = make_four_cell()

    def test_block_constancy(self):
        ch = sample_channels(self.p, 6, FadingSpec(tau=3, seed=1))
        for values in ch.coefficients.values():
            self.assertEqual(values.shape, (6, 1, 1))
            np.testing.assert_array_equal(values[0], values[2])
            np.testing.assert_array_equal(values[3], values[5])
            self.assertNotEqual(values[0, 0, 0], values[3, 0, 0])

    def test_partial_block(self):
        ch = sample_channels(self.p, 4, FadingSpec(tau=3, seed=1))
        values = ch.coefficients[("a1", "A")]
        self.assertEqual(values.shape[0], 4)
        np.testing.assert_array_equal(values[0], values[2])

    def test_deterministic(self):
        a = sample_channels(self.p, 3, FadingSpec(tau=1, seed=42))
        b = sample_channels(self.p, 3, FadingSpec(tau=1, seed=42))
        c = sample_channels(self.p, 3, FadingSpec(tau=1, seed=43))
        for link in a.coefficients:
            np.testing.assert_array_equal(a.coefficients[link], b.coefficients[link])
        self.assertFalse(np.allclose(a.coefficients[("a1", "A")], c.coefficients[("a1", "A")]))
        self.assertEqual(dump_channels(a), dump_channels(b))

    def test_only_connected_links(self):
        ch = sample_channels(self.p, 1, FadingSpec(seed=0))
        self.assertEqual(set(ch.coefficients), set(self.p.topology.connectivity))

    def test_bounds_and_resample_ratio(self):
        drawn = kept = 0
        for seed in range(200):
            ch = sample_channels(self.p, 12, FadingSpec(tau=1, seed=seed))
            for values in ch.coefficients.values():
                magnitudes = np.abs(values)
                self.assertTrue(np.all(magnitudes >= 0.05) and np.all(magnitudes <= 20.0))
            drawn += ch.entries_drawn
            kept += ch.entries_kept
        self.assertLess(drawn / kept, 1.01)

    def test_receiver_override(self):
        ch = sample_channels(self.p, 3, FadingSpec(tau=1, receiver_tau={"b2": 3}, seed=2))
        b2 = ch.coefficients[("b2", "B")]
        np.testing.assert_array_equal(b2[0], b2[2])
        a1 = ch.coefficients[("a1", "A")]
        self.assertNotEqual(a1[0, 0, 0], a1[1, 0, 0])

    def test_multi_antenna_shapes(self):
        ch = sample_channels(make_macro_femto(), 3, FadingSpec(seed=0, spatial="independent-scaled"))
        self.assertEqual(ch.coefficients[("a1", "B")].shape, (3, 2, 2))
        self.assertEqual(ch.coefficients[("b1", "B")].shape, (3, 1, 2))

    def test_invalid_horizon(self):
        with self.assertRaises(InvalidParameterError):
            sample_channels(self.p, 0, FadingSpec())

    def test_dump_format(self):
        ch = sample_channels(self.p, 6, FadingSpec(tau=3, seed=0))
        doc = json.loads(dump_channels(ch))
        self.assertEqual(doc["T"], 6)
        self.assertEqual(len(doc["links"]["a1|A"]), 2)
        self.assertEqual(len(doc["links"]["a1|A"][0][0][0]), 2)


if __name__ == "__main__":
    unittest.main()

"""
Tests for the named problems, schemes and random generators
"""
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import catalog
from src.errors import InvalidParameterError


class ProblemNamesTestCase(unittest.TestCase):
    def test_clusters(self):
        self.assertEqual(len(catalog.problem("four_cell_downlink").messages), 8)
        self.assertEqual(catalog.problem("four_cell_uplink").name, "four_cell_uplink")
        self.assertEqual(catalog.problem("macro_femto").name, "macro_femto")

    def test_arrays(self):
        self.assertEqual(len(catalog.problem("linear:12").messages), 24)
        self.assertEqual(catalog.problem("hex:7x7").name, "hex:7x7")
        self.assertEqual(len(catalog.problem("square:5x5").topology.transmitter_ids), 25)
        uplink = catalog.problem("linear:12:uplink")
        self.assertEqual(len(uplink.topology.receiver_ids), 12)

    def test_duk(self):
        self.assertEqual(catalog.problem("duk:2,1,5").name, "duk:2,1,5")

    def test_bad_names(self):
        for name in ("nowhere", "linear:", "linear:x", "square:5", "hex:7x7x7", "duk:1,1"):
            with self.assertRaises(InvalidParameterError, msg=name):
                catalog.problem(name)


class SchemeNamesTestCase(unittest.TestCase):
    def test_every_builtin_fits_its_problem(self):
        for problem_name, scheme_name, tau in catalog.BUILTIN_SCHEMES:
            p = catalog.problem(problem_name)
            s = catalog.scheme(problem_name, scheme_name, p)
            s.validate(p)
            self.assertEqual(s.T % tau, 0, (problem_name, scheme_name))

    def test_unknown_scheme(self):
        with self.assertRaises(InvalidParameterError):
            catalog.scheme("four_cell_downlink", "aligned")
        with self.assertRaises(InvalidParameterError):
            catalog.scheme("macro_femto", "coherent")


class GicNamesTestCase(unittest.TestCase):
    def test_named(self):
        self.assertEqual(len(catalog.gic("five_message").receivers), 5)
        self.assertEqual(catalog.gic("two_user").name, "two_user")
        self.assertEqual(len(catalog.all_known_gic(4).messages), 4)
        with self.assertRaises(InvalidParameterError):
            catalog.gic("missing")

    def test_xor_plan_uses_macro_femto_messages(self):
        g = catalog.macro_femto_gic()
        for coded in catalog.MACRO_FEMTO_XOR_PLAN:
            self.assertTrue(coded <= g.messages)


class RandomInstancesTestCase(unittest.TestCase):
    def test_single_message_problems(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = catalog.random_single_message_problem(rng)
            self.assertEqual(len(p.messages), len(p.topology.transmitter_ids))
            for rx in p.topology.receiver_ids:
                self.assertTrue(p.desired[rx])
            catalog.random_scheme(rng, p).validate(p)

    def test_unicast_gic(self):
        g = catalog.random_unicast_gic(np.random.default_rng(3), n=6)
        self.assertEqual(len(g.receivers), 6)
        for r in g.receivers:
            self.assertEqual(len(r.desired), 1)
            self.assertFalse(r.desired & r.known)


if __name__ == "__main__":
    unittest.main()

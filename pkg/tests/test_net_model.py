"""
Tests for problems, generators, the reciprocal map and JSON documents
"""
import json
import os
import sys
import unittest

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import catalog
from src.errors import InvalidParameterError, ProblemParseError, UnsupportedConfigurationError
from src.net_model import (
    Node,
    build_problem,
    load_problem,
    make_four_cell,
    make_hex_array,
    make_linear_array,
    make_macro_femto,
    make_square_array,
    make_symmetric_duk,
    reciprocal,
    store_problem,
)


class GeneratorTestCase(unittest.TestCase):
    def test_four_cell_downlink(self):
        p = make_four_cell()
        self.assertEqual(p.topology.transmitter_ids, ["A", "B", "C", "D"])
        self.assertEqual(len(p.topology.receiver_ids), 8)
        self.assertEqual(p.topology.heard_by("b2"), ["B", "D"])
        self.assertEqual(p.interferers("a1"), ["a2", "b1", "b2"])
        self.assertEqual(p.messages_of("A"), ["a1", "a2"])
        self.assertTrue(all(p.topology.degree(rx) == 2 for rx in p.topology.receiver_ids))

    def test_four_cell_merged(self):
        p = make_four_cell(merged=True)
        self.assertEqual(p.topology.receiver_ids, ["ab", "bd", "ca", "cd"])
        self.assertEqual(p.desired["ab"], frozenset({"a1", "b1"}))
        self.assertEqual(p.interferers("ab"), ["a2", "b2"])

    def test_linear_array(self):
        p = make_linear_array(12)
        self.assertEqual(len(p.topology.transmitters), 12)
        self.assertEqual(len(p.messages), 24)
        self.assertEqual(p.topology.heard_by("u0>11"), ["c0", "c11"])
        self.assertEqual(p.cells.facing["u0>11"], "c11")
        self.assertEqual(p.name, "linear:12")
        self.assertTrue(p.cells.is_array)

    def test_array_sizes(self):
        self.assertEqual(len(make_square_array(5, 5).messages), 100)
        hexagonal = make_hex_array(7, 7)
        self.assertEqual(len(hexagonal.messages), 294)
        self.assertEqual(len(hexagonal.cell_labels), 49)
        for rx in hexagonal.topology.receiver_ids:
            self.assertEqual(hexagonal.topology.degree(rx), 2)

    def test_array_too_small(self):
        with self.assertRaises(InvalidParameterError):
            make_linear_array(2)
        with self.assertRaises(InvalidParameterError):
            make_square_array(2, 4)

    def test_macro_femto(self):
        p = make_macro_femto()
        self.assertEqual(p.topology.tx_antennas("A"), 2)
        self.assertEqual(p.topology.rx_antennas("b1"), 1)
        self.assertEqual(p.interferers("a1"), ["a2", "b1"])
        self.assertEqual(p.interferers("b1"), [])

    def test_duk(self):
        p = make_symmetric_duk(1, 1, 5)
        self.assertEqual(p.topology.heard_by("r1"), ["t1", "t3", "t4"])
        self.assertEqual(p.name, "duk:1,1,5")
        with self.assertRaises(InvalidParameterError):
            make_symmetric_duk(2, 2, 4)
        with self.assertRaises(InvalidParameterError):
            make_symmetric_duk(1, 2, 6)


class ValidationTestCase(unittest.TestCase):
    def test_desired_requires_link(self):
        with self.assertRaises(InvalidParameterError):
            build_problem([Node("t")], [Node("r")], [], {"m": "t"}, {"r": {"m"}})

    def test_orphan_message(self):
        with self.assertRaises(InvalidParameterError):
            build_problem([Node("t")], [Node("r")], [("r", "t")], {"m": "t", "n": "t"}, {"r": {"m"}})

    def test_duplicate_and_antennas(self):
        with self.assertRaises(InvalidParameterError):
            build_problem([Node("t"), Node("t")], [Node("r")], [("r", "t")], {"m": "t"}, {"r": {"m"}})
        with self.assertRaises(InvalidParameterError):
            build_problem([Node("t", 0)], [Node("r")], [("r", "t")], {"m": "t"}, {"r": {"m"}})

    def test_undeclared_link(self):
        with self.assertRaises(InvalidParameterError):
            build_problem([Node("t")], [Node("r")], [("r", "x")], {"m": "t"}, {"r": {"m"}})

    def test_empty_problem(self):
        p = build_problem([Node("t")], [Node("r")], [("r", "t")], {}, {})
        self.assertEqual(p.messages, [])
        self.assertEqual(p.desired["r"], frozenset())


class ReciprocalTestCase(unittest.TestCase):
    def test_four_cell(self):
        up = reciprocal(make_four_cell())
        self.assertEqual(up.name, "four_cell_uplink")
        self.assertEqual(up.origin["a1"], "a1")
        self.assertEqual(sorted(up.desired["A"]), ["a1", "a2"])
        self.assertEqual(up.topology.hearers("b2"), ["B", "D"])
        self.assertEqual(up.cell_of("b2"), "B")
        self.assertEqual(up, make_four_cell("uplink"))

    def test_involution_on_catalog(self):
        for name in ("four_cell_downlink", "macro_femto", "linear:6", "square:3x3", "hex:3x3", "duk:2,1,5"):
            p = catalog.problem(name)
            self.assertEqual(reciprocal(reciprocal(p)), p, name)

    def test_involution_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            p = catalog.random_single_message_problem(rng)
            self.assertEqual(reciprocal(reciprocal(p)), p)

    def test_multicast_refused(self):
        with self.assertRaises(UnsupportedConfigurationError):
            reciprocal(build_problem([Node("t")], [Node("r1"), Node("r2")], [("r1", "t"), ("r2", "t")],
                                     {"m": "t"}, {"r1": {"m"}, "r2": {"m"}}))


class DocumentTestCase(unittest.TestCase):
    def test_round_trip(self):
        for name in ("four_cell_merged", "macro_femto", "hex:3x3:uplink", "duk:1,1,5"):
            p = catalog.problem(name)
            text = store_problem(p)
            q = load_problem(text)
            self.assertEqual(q, p, name)
            self.assertEqual(store_problem(q), text)

    def test_round_trip_random(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            p = catalog.random_single_message_problem(rng)
            self.assertEqual(load_problem(store_problem(p)), p)

    def test_parse_errors_name_field(self):
        doc = json.loads(store_problem(make_four_cell()))
        doc["messages"][0]["origin"] = "Z"
        with self.assertRaises(ProblemParseError) as ctx:
            load_problem(json.dumps(doc))
        self.assertEqual(ctx.exception.field, "messages[0].origin")

        doc = json.loads(store_problem(make_four_cell()))
        doc["transmitters"][1]["antennas"] = 0
        with self.assertRaises(ProblemParseError) as ctx:
            load_problem(json.dumps(doc))
        self.assertEqual(ctx.exception.field, "transmitters[1].antennas")

        with self.assertRaises(ProblemParseError) as ctx:
            load_problem("{not json")
        self.assertEqual(ctx.exception.field, "document")

    def test_wrongly_typed_fields_are_parse_errors(self):
        cases = [
            (lambda d: d["messages"][0].__setitem__("origin", ["A"]), "messages[0].origin"),
            (lambda d: d["messages"][0].__setitem__("destinations", [["a1"]]), "messages[0].destinations"),
            (lambda d: d["connectivity"].__setitem__(0, [["a1"], "A"]), "connectivity[0]"),
            (lambda d: d["connectivity"].__setitem__(0, ["a1", {"id": "A"}]), "connectivity[0]"),
            (lambda d: d.__setitem__("dims", ["x"]), "dims"),
            (lambda d: d.__setitem__("cells", {"A": ["A"]}), "cells.A"),
            (lambda d: d.__setitem__("geometry", ["hex"]), "geometry"),
            (lambda d: d.__setitem__("name", 7), "name"),
        ]
        for corrupt, field in cases:
            doc = json.loads(store_problem(make_four_cell()))
            corrupt(doc)
            with self.assertRaises(ProblemParseError, msg=field) as ctx:
                load_problem(json.dumps(doc))
            self.assertEqual(ctx.exception.field, field)

    def test_array_sites_must_be_integers(self):
        doc = json.loads(store_problem(make_linear_array(6)))
        first = sorted(doc["sites"])[0]
        doc["sites"][first] = "0"
        with self.assertRaises(ProblemParseError) as ctx:
            load_problem(json.dumps(doc))
        self.assertEqual(ctx.exception.field, f"sites.{first}")

    def test_desired_without_link_is_parse_error(self):
        doc = json.loads(store_problem(make_four_cell()))
        doc["connectivity"] = [link for link in doc["connectivity"] if link != ["a1", "A"]]
        with self.assertRaises(ProblemParseError):
            load_problem(json.dumps(doc))


if __name__ == "__main__":
    unittest.main()

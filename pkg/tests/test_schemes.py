"""
Tests for linear schemes, reuse schedules and their documents
"""
import os
import sys
import unittest
from fractions import Fraction

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import catalog
from src.channel import FadingSpec
from src.errors import InvalidParameterError, ProblemParseError, SchemeMismatchError
from src.net_model import make_four_cell, make_hex_array, make_linear_array, make_square_array
from src.schemes import (
    LinearScheme,
    Phase,
    Schedule,
    Stream,
    aligned_reuse,
    conventional_reuse,
    duk_alignment_vectors,
    four_cell_downlink_coherent,
    four_cell_downlink_iid,
    interference_diversity_scheme,
    load_schedule,
    load_scheme,
    schedule_to_scheme,
    store_schedule,
    store_scheme,
    symmetric_duk_scheme,
)
from src.verifier import verify


class LinearSchemeTestCase(unittest.TestCase):
    def test_claimed_dof(self):
        s = four_cell_downlink_coherent()
        self.assertEqual(s.T, 3)
        self.assertEqual(s.claimed_sum_dof, Fraction(8, 3))
        self.assertEqual(s.claimed_dof("a1"), Fraction(1, 3))
        iid = four_cell_downlink_iid()
        self.assertEqual(iid.claimed_sum_dof, Fraction(5, 2))
        self.assertEqual(iid.claimed_dof("b1"), 0)

    def test_diversity_claims(self):
        s = interference_diversity_scheme()
        self.assertEqual(s.claimed_dof("a1") + s.claimed_dof("a2"), Fraction(4, 3))
        self.assertEqual(s.claimed_dof("b1"), 1)
        self.assertEqual(s.claimed_dof("c1"), 1)

    def test_duk_scheme_shape(self):
        s = symmetric_duk_scheme(1, 1, 5)
        self.assertEqual(s.T, 5)
        self.assertEqual(s.claimed_dof("W3"), Fraction(2, 5))
        self.assertEqual(s.declared_tau, 1)
        self.assertEqual(symmetric_duk_scheme(2, 1, 5).claimed_dof("W1"), Fraction(1, 2))
        vectors = duk_alignment_vectors(2, 1, 6)
        self.assertEqual(vectors.shape, (5, 6))
        self.assertTrue(np.all(np.abs(vectors[:, 5]) > 0))

    def test_validation(self):
        s = four_cell_downlink_coherent()
        s.validate(make_four_cell())
        with self.assertRaises(SchemeMismatchError):
            s.validate(make_four_cell("uplink"))
        with self.assertRaises(SchemeMismatchError):
            interference_diversity_scheme().validate(make_four_cell())
        with self.assertRaises(InvalidParameterError):
            LinearScheme(2, [Stream("a1", np.ones((3, 1)))])
        with self.assertRaises(InvalidParameterError):
            LinearScheme(0, [])

    def test_antenna_mismatch(self):
        p = catalog.problem("macro_femto")
        bad = LinearScheme(1, [Stream("b1", np.ones((1, 1)))], name="bad")
        with self.assertRaises(SchemeMismatchError):
            bad.validate(p)

    def test_empty(self):
        self.assertTrue(LinearScheme(2, [Stream("a1", np.zeros((2, 1)))]).is_empty)
        self.assertFalse(four_cell_downlink_iid().is_empty)

    def test_rescaled(self):
        s = four_cell_downlink_iid()
        scaled = s.rescaled([2.0] * len(s.streams))
        np.testing.assert_array_equal(scaled.streams[0].vectors, 2 * s.streams[0].vectors)
        self.assertEqual(scaled.claimed_sum_dof, s.claimed_sum_dof)


class ReuseTestCase(unittest.TestCase):
    def _per_cell(self, schedule, p):
        values = set(schedule.per_cell_dof(p).values())
        self.assertEqual(len(values), 1)
        return values.pop()

    def test_aligned_reuse(self):
        for p, expected in [
            (make_linear_array(12), Fraction(2, 3)),
            (make_square_array(5, 5), Fraction(4, 5)),
            (make_hex_array(7, 7), Fraction(6, 7)),
        ]:
            schedule = aligned_reuse(p)
            self.assertEqual(schedule.violations(p), [])
            self.assertEqual(self._per_cell(schedule, p), expected, p.name)

    def test_aligned_reuse_uplink(self):
        for p, expected in [
            (make_linear_array(6, "uplink"), Fraction(2, 3)),
            (make_square_array(5, 5, "uplink"), Fraction(4, 5)),
            (make_hex_array(7, 7, "uplink"), Fraction(6, 7)),
        ]:
            schedule = aligned_reuse(p)
            schedule.validate(p)
            self.assertEqual(self._per_cell(schedule, p), expected, p.name)

    def test_conventional_reuse(self):
        for p, expected in [
            (make_linear_array(12), Fraction(1, 2)),
            (make_square_array(6, 6), Fraction(1, 2)),
            (make_hex_array(6, 6), Fraction(1, 3)),
        ]:
            schedule = conventional_reuse(p)
            self.assertEqual(schedule.violations(p), [])
            self.assertEqual(self._per_cell(schedule, p), expected, p.name)

    def test_period_required(self):
        with self.assertRaises(InvalidParameterError):
            aligned_reuse(make_linear_array(7))
        with self.assertRaises(InvalidParameterError):
            conventional_reuse(make_hex_array(7, 7))
        with self.assertRaises(InvalidParameterError):
            aligned_reuse(make_four_cell())

    def test_violations_reported(self):
        p = make_four_cell()
        bad = Schedule([Phase(Fraction(1), frozenset({("a1", "a1"), ("b1", "b1")}))])
        self.assertTrue(bad.violations(p))
        with self.assertRaises(InvalidParameterError):
            bad.validate(p)

    def test_weights_must_sum_to_one(self):
        with self.assertRaises(InvalidParameterError):
            Schedule([Phase(Fraction(1, 2), frozenset())])
        self.assertEqual(Schedule([]).phases, [])


class ScheduleToSchemeTestCase(unittest.TestCase):
    def test_preserves_dof(self):
        for p in (make_linear_array(6), make_square_array(5, 5), make_hex_array(6, 6)):
            for reuse in (aligned_reuse, conventional_reuse):
                try:
                    schedule = reuse(p)
                except InvalidParameterError:
                    continue
                scheme = schedule_to_scheme(schedule, p)
                self.assertEqual(scheme.claimed_message_dof(p), schedule.message_dof(p))
                report = verify(p, scheme, FadingSpec(tau=1, seed=3), draws=2)
                self.assertTrue(report.passed, p.name)
                self.assertEqual(report.message_dof, schedule.message_dof(p))

    def test_random_two_phase(self):
        rng = np.random.default_rng(8)
        p = make_four_cell()
        for _ in range(100):
            k = int(rng.integers(1, 6))
            w = Fraction(k, 6)
            schedule = Schedule([
                Phase(w, frozenset({("a1", "a1"), ("d1", "d1")})),
                Phase(1 - w, frozenset({("b2", "b2")})),
            ])
            scheme = schedule_to_scheme(schedule, p)
            self.assertEqual(scheme.claimed_message_dof(p), schedule.message_dof(p))

    def test_explicit_denominator(self):
        p = make_four_cell()
        schedule = Schedule([Phase(Fraction(1, 2), frozenset({("a1", "a1")})),
                             Phase(Fraction(1, 2), frozenset({("d2", "d2")}))])
        self.assertEqual(schedule_to_scheme(schedule, p, denominator=4).T, 4)
        with self.assertRaises(InvalidParameterError):
            schedule_to_scheme(schedule, p, denominator=3)

    def test_empty_schedule(self):
        scheme = schedule_to_scheme(Schedule([]), make_four_cell())
        self.assertTrue(scheme.is_empty)


class DocumentTestCase(unittest.TestCase):
    def test_scheme_round_trip(self):
        for s in (four_cell_downlink_coherent(), interference_diversity_scheme(), symmetric_duk_scheme(2, 1, 6)):
            text = store_scheme(s)
            self.assertEqual(load_scheme(text), s)
            self.assertEqual(store_scheme(load_scheme(text)), text)

    def test_schedule_round_trip(self):
        schedule = aligned_reuse(make_linear_array(6))
        text = store_schedule(schedule)
        loaded = load_schedule(text)
        self.assertEqual(loaded.phases, schedule.phases)
        self.assertIn('"weight": "1/3"', text)

    def test_parse_errors(self):
        with self.assertRaises(ProblemParseError) as ctx:
            load_scheme('{"T": 0, "streams": []}')
        self.assertEqual(ctx.exception.field, "T")
        with self.assertRaises(ProblemParseError) as ctx:
            load_scheme('{"T": 1, "streams": [{"message": "a1"}]}')
        self.assertEqual(ctx.exception.field, "streams[0]")


if __name__ == "__main__":
    unittest.main()

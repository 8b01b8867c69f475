"""
Tests for exact rank and the rational simplex
"""
import os
import sys
import unittest
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.rational import complex_rank, fraction_text, maximize, parse_fraction, rank


class RankTestCase(unittest.TestCase):
    def test_rank(self):
        self.assertEqual(rank([[1, 2], [2, 4]]), 1)
        self.assertEqual(rank([[1, 0, 0], [0, 1, 0], [1, 1, 0]]), 2)
        self.assertEqual(rank([[Fraction(1, 3), 1], [1, 3]]), 1)
        self.assertEqual(rank([]), 0)

    def test_complex_rank(self):
        # [[1, i], [i, -1]]: the second row is i times the first
        self.assertEqual(complex_rank([[1, 0], [0, -1]], [[0, 1], [1, 0]]), 1)
        self.assertEqual(complex_rank([[1, 0], [0, 1]], [[0, 0], [0, 0]]), 2)


class SimplexTestCase(unittest.TestCase):
    def test_small_program(self):
        solution = maximize([[1, 0], [0, 1], [1, 1]], [1, 1, Fraction(3, 2)], [1, 1])
        self.assertEqual(solution.value, Fraction(3, 2))
        self.assertEqual(sum(solution.x), Fraction(3, 2))
        self.assertEqual(solution.y, [0, 0, 1])

    def test_four_cell_shape(self):
        # a cycle of pairwise constraints x_i + x_{i+1} <= 1 on 3 variables
        A = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
        solution = maximize(A, [1, 1, 1], [1, 1, 1])
        self.assertEqual(solution.value, Fraction(3, 2))
        self.assertEqual(solution.x, [Fraction(1, 2)] * 3)

    def test_duality(self):
        A = [[2, 1], [1, 3], [1, 0]]
        b = [4, 6, Fraction(3, 2)]
        solution = maximize(A, b, [3, 2])
        dual_value = sum(y * bi for y, bi in zip(solution.y, b))
        self.assertEqual(dual_value, solution.value)
        for j in range(2):
            self.assertGreaterEqual(sum(solution.y[i] * A[i][j] for i in range(3)), [3, 2][j])

    def test_unbounded(self):
        with self.assertRaises(ValueError):
            maximize([[1, -1]], [1], [1, 1])

    def test_negative_rhs(self):
        with self.assertRaises(ValueError):
            maximize([[1]], [-1], [1])


class TextTestCase(unittest.TestCase):
    def test_fraction_text(self):
        self.assertEqual(fraction_text(Fraction(8, 3)), "8/3")
        self.assertEqual(fraction_text(Fraction(4, 2)), "2")
        self.assertEqual(parse_fraction("6/7"), Fraction(6, 7))
        with self.assertRaises(ValueError):
            parse_fraction("six")


if __name__ == "__main__":
    unittest.main()

"""
Exact Rational Arithmetic
Fraction-valued matrix rank and a Bland-rule simplex for small linear programs
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix by Gaussian elimination (no tolerance)"""
    work = [list(map(Fraction, row)) for row in rows]
    if not work or not work[0]:
        return 0
    n_rows, n_cols = len(work), len(work[0])
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead = work[r][col]
        for i in range(r + 1, n_rows):
            factor = work[i][col]
            if factor:
                factor /= lead
                row_i, row_r = work[i], work[r]
                for k in range(col, n_cols):
                    row_i[k] -= factor * row_r[k]
        r += 1
        if r == n_rows:
            break
    return r


def complex_rank(real: Sequence[Sequence[Fraction]], imag: Sequence[Sequence[Fraction]]) -> int:
    """
    Rank over C of the matrix real + i*imag

    Uses the realification [[A, -B], [B, A]], whose real rank is twice the
    complex rank.
    """
    if not real or not real[0]:
        return 0
    top = [list(a) + [-x for x in b] for a, b in zip(real, imag)]
    bottom = [list(b) + list(a) for a, b in zip(real, imag)]
    return rank(top + bottom) // 2


@dataclass
class LPSolution:
    """Optimal primal point, dual multipliers and value of max c.x"""
    value: Fraction
    x: List[Fraction]
    y: List[Fraction]
    pivots: int


class RationalSimplex:
    """
    Dictionary-form simplex for max c.x subject to A x <= b, x >= 0

    Requires b >= 0 so the slack basis is feasible. Bland's rule guarantees
    termination; all arithmetic is exact.
    """

    def __init__(self, A: Sequence[Sequence], b: Sequence, c: Sequence):
        self.m = len(A)
        self.n = len(c)
        self.A: Matrix = [[Fraction(v) for v in row] for row in A]
        self.b: List[Fraction] = [Fraction(v) for v in b]
        self.c: List[Fraction] = [Fraction(v) for v in c]
        if any(len(row) != self.n for row in self.A):
            raise ValueError("constraint rows must match the objective length")
        if len(self.b) != self.m:
            raise ValueError("right-hand side must have one entry per row")
        if any(v < 0 for v in self.b):
            raise ValueError("right-hand side must be nonnegative")
        self.z = Fraction(0)
        self.nb_vars = list(range(self.n))
        self.b_vars = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def _pivot(self, i: int, j: int) -> None:
        piv = self.A[i][j]
        delta = self.c[j] / piv
        for col in range(self.n):
            self.c[col] -= delta * self.A[i][col]
        self.c[j] = -delta
        self.z += delta * self.b[i]

        row_i = self.A[i]
        for col in range(self.n):
            row_i[col] = 1 / piv if col == j else row_i[col] / piv
        self.b[i] /= piv
        for k in range(self.m):
            if k == i:
                continue
            f = self.A[k][j]
            if not f:
                continue
            row_k = self.A[k]
            for col in range(self.n):
                row_k[col] = -f / piv if col == j else row_k[col] - f * row_i[col]
            self.b[k] -= f * self.b[i]

        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def solve(self) -> LPSolution:
        while True:
            entering = [(self.nb_vars[j], j) for j in range(self.n) if self.c[j] > 0]
            if not entering:
                break
            _, j = min(entering)
            candidates = [
                (self.b[i] / self.A[i][j], self.b_vars[i], i)
                for i in range(self.m)
                if self.A[i][j] > 0
            ]
            if not candidates:
                raise ValueError("linear program is unbounded")
            _, _, i = min(candidates)
            self._pivot(i, j)

        x = [Fraction(0)] * self.n
        for i, var in enumerate(self.b_vars):
            if var < self.n:
                x[var] = self.b[i]
        y = [Fraction(0)] * self.m
        for j, var in enumerate(self.nb_vars):
            if var >= self.n:
                y[var - self.n] = -self.c[j]
        logger.debug("rational simplex: %d rows, %d cols, %d pivots", self.m, self.n, self.pivots)
        return LPSolution(value=self.z, x=x, y=y, pivots=self.pivots)


def maximize(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPSolution:
    return RationalSimplex(A, b, c).solve()


def fraction_text(value) -> str:
    """Render a rational as 'num/den', or 'num' when integral"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: '{text}'") from exc

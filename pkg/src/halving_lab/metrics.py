"""Counting recurrences for the recursive construction and their bound chains.

Pure integer arithmetic: the row (a_i, n_i, m_i) gives the progression length,
point count and listed-halving-segment count at depth i.  Both bracketing
inequalities are certified with exact rational comparisons; the irrational
constant e**2 in the upper bracket is replaced by a certified rational lower
bound, so a pass here implies the original inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .reporting import VerificationReport

# 2.71**2 < e**2 < 2.72**2; using the lower end makes the upper-bound check
# strictly stronger than the target inequality
E_SQUARED_LOWER = Fraction(73441, 10000)
E_SQUARED_UPPER = Fraction(73984, 10000)


@dataclass
class CountsTable:
    """Rows (i, a_i, n_i, m_i), exact, for i = 0..i_max."""

    rows: list[tuple[int, int, int, int]]

    def row(self, i: int) -> tuple[int, int, int, int]:
        return self.rows[i]

    def n(self, i: int) -> int:
        return self.rows[i][2]

    def m(self, i: int) -> int:
        return self.rows[i][3]

    @property
    def i_max(self) -> int:
        return len(self.rows) - 1


def counts(i_max: int) -> CountsTable:
    """a_i = 2**i, m_i = (2 a_i + 1) m_{i-1}, n_i = a_i n_{i-1} + m_{i-1} + m_{i-2}.

    Base row (1, 2, 1).  The convention m_{-1} = 1 makes the point recurrence
    valid already at i = 1 (the depth-0 set has exactly one bold point).
    """
    if i_max < 0:
        raise ValueError("depth must be non-negative")
    rows = [(0, 1, 2, 1)]
    m_prev2 = 1  # m_{-1}
    for i in range(1, i_max + 1):
        a = 2**i
        _, _, n_prev, m_prev = rows[-1]
        m_i = (2 * a + 1) * m_prev
        n_i = a * n_prev + m_prev + m_prev2
        rows.append((i, a, n_i, m_i))
        m_prev2 = m_prev
    return CountsTable(rows)


def check_bounds(table: CountsTable) -> VerificationReport:
    """Certify, per row, the two exact bracketing chains:

        (1/3) 2**(i(i+3)/2)  <  m_i  <  (e^2/3) 2**(i(i+3)/2)
        2**(i(i+1)/2)        <  n_i  <  4(i+1) 2**(i(i+1)/2)

    Both exponents are integers (i(i+3) and i(i+1) are even), so every
    comparison is a plain rational one.
    """
    report = VerificationReport(name="count-recurrence-bounds")
    report.details["e_squared_bound_used"] = E_SQUARED_LOWER
    for i, _a, n_i, m_i in table.rows:
        em = (i * (i + 3)) // 2
        en = (i * (i + 1)) // 2
        m_lo = Fraction(1, 3) * 2**em
        m_hi = E_SQUARED_LOWER / 3 * 2**em
        n_lo = 2**en
        n_hi = 4 * (i + 1) * 2**en
        report.checked += 4
        if not (m_lo < m_i):
            report.record_violation(("m lower", i, m_i, m_lo))
        if not (m_i < m_hi):
            report.record_violation(("m upper", i, m_i, m_hi))
        if not (n_lo < n_i):
            report.record_violation(("n lower", i, n_i, n_lo))
        if not (n_i < n_hi):
            report.record_violation(("n upper", i, n_i, n_hi))
    return report

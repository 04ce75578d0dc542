"""Fisher's exact test for 2x2 contingency tables.

The two-sided p-value follows the probability-mass criterion: it sums the
hypergeometric probabilities of every table (with the observed margins) whose
probability does not exceed the observed one. Tail membership is decided in
exact integer arithmetic (binomial-coefficient weights), so results agree
with full enumeration to the final float rounding.
"""

import math
from dataclasses import dataclass

from stratembed.errors import DomainError


@dataclass
class ContingencyTable:
    """Counts: rows = code present/absent, columns = cluster A/B."""

    a: int  # present in A
    b: int  # present in B
    c: int  # absent in A
    d: int  # absent in B

    def __post_init__(self):
        for name in "abcd":
            value = getattr(self, name)
            if value < 0 or value != int(value):
                raise DomainError(f"cell {name} must be a non-negative integer, got {value}")
            setattr(self, name, int(value))

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


def odds_ratio(table: ContingencyTable) -> float:
    """Sample odds ratio; Haldane-Anscombe +0.5 applied when any cell is 0."""
    a, b, c, d = table.a, table.b, table.c, table.d
    if min(a, b, c, d) == 0:
        a, b, c, d = a + 0.5, b + 0.5, c + 0.5, d + 0.5
    return (a * d) / (b * c)


def fisher_exact(table: ContingencyTable):
    """Return ``(odds_ratio, two_sided_p_value)``."""
    a, b, c, d = table.a, table.b, table.c, table.d
    row1 = a + b  # code present
    row2 = c + d
    col1 = a + c  # cluster A size
    col2 = b + d
    if row1 + row2 == 0 or col1 == 0 or col2 == 0:
        raise DomainError(f"degenerate margins in table ({a}, {b}, {c}, {d})")

    lo = max(0, col1 - row2)
    hi = min(row1, col1)
    observed = math.comb(row1, a) * math.comb(row2, col1 - a)
    tail = 0
    for x in range(lo, hi + 1):
        w = math.comb(row1, x) * math.comb(row2, col1 - x)
        if w <= observed:
            tail += w
    total = math.comb(row1 + row2, col1)
    # int / int true division is correctly rounded, so p is exact to the ulp
    p = min(1.0, tail / total)
    return odds_ratio(table), p

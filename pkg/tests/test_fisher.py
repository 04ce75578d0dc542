import math

import numpy as np
import pytest

from oracles import fisher_two_sided_exact
from stratembed.analysis.fisher import ContingencyTable, fisher_exact, odds_ratio
from stratembed.errors import DomainError
from stratembed.rng import Rng


def test_balanced_table_is_exactly_null():
    ratio, p = fisher_exact(ContingencyTable(5, 5, 5, 5))
    assert ratio == 1.0
    assert p == 1.0


def test_perfect_separation_tiny_p():
    _, p = fisher_exact(ContingencyTable(10, 0, 0, 10))
    assert p < 1e-4
    assert p == pytest.approx(fisher_two_sided_exact(10, 0, 0, 10), abs=1e-15)


def test_matches_enumeration_oracle_random_tables():
    rng = Rng(77)
    for _ in range(300):
        a, b, c, d = (int(x) for x in rng.integers(0, 26, size=4))
        if (a + b == 0) or (a + c == 0) or (b + d == 0):
            continue
        _, p = fisher_exact(ContingencyTable(a, b, c, d))
        assert abs(p - fisher_two_sided_exact(a, b, c, d)) <= 1e-12


def test_symmetry_swapping_clusters_inverts_odds_ratio():
    rng = Rng(5)
    for _ in range(100):
        a, b, c, d = (int(x) for x in rng.integers(1, 30, size=4))
        r1, p1 = fisher_exact(ContingencyTable(a, b, c, d))
        r2, p2 = fisher_exact(ContingencyTable(b, a, d, c))
        assert r1 * r2 == pytest.approx(1.0, rel=1e-12)
        assert p1 == pytest.approx(p2, abs=1e-12)


def test_zero_cells_get_continuity_correction():
    table = ContingencyTable(10, 0, 5, 12)
    ratio = odds_ratio(table)
    assert math.isfinite(ratio) and math.isfinite(math.log(ratio))
    assert ratio == pytest.approx((10.5 * 12.5) / (0.5 * 5.5))


def test_degenerate_margins_rejected():
    with pytest.raises(DomainError):
        fisher_exact(ContingencyTable(0, 0, 0, 0))
    with pytest.raises(DomainError):
        fisher_exact(ContingencyTable(0, 5, 0, 5))  # cluster A empty


def test_negative_counts_rejected():
    with pytest.raises(DomainError):
        ContingencyTable(-1, 2, 3, 4)


def test_p_value_in_unit_interval():
    rng = Rng(123)
    for _ in range(200):
        a, b, c, d = (int(x) for x in rng.integers(0, 50, size=4))
        if (a + c == 0) or (b + d == 0) or (a + b + c + d == 0):
            continue
        _, p = fisher_exact(ContingencyTable(a, b, c, d))
        assert 0.0 < p <= 1.0

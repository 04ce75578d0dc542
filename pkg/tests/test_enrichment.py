import numpy as np
import pytest

from stratembed.analysis.enrichment import (
    enrich_pairwise,
    enrichment_csv_rows,
    hierarchical_enrichment,
    render_enrichment_table,
)
from stratembed.analysis.fisher import ContingencyTable, fisher_exact
from stratembed.analysis.hierarchy import agglomerative_ward
from stratembed.errors import DomainError
from stratembed.rng import Rng


def sets_with_code(n, code, count, filler="Z99"):
    out = []
    for i in range(n):
        s = {filler}
        if i < count:
            s.add(code)
        out.append(frozenset(s))
    return out


def test_identical_distributions_nothing_significant():
    a = sets_with_code(50, "X01", 20)
    b = sets_with_code(50, "X01", 20)
    records = enrich_pairwise(a, b, alpha=0.05)
    assert not any(r.significant for r in records)


def test_planted_code_detected_with_positive_log_odds():
    a = sets_with_code(100, "X01", 80)
    b = sets_with_code(100, "X01", 10)
    records = enrich_pairwise(a, b, alpha=0.05, label_a="A", label_b="B")
    hit = next(r for r in records if r.code == "X01")
    assert hit.significant
    assert hit.log_odds > 0
    assert hit.enriched_in == "A"
    # p matches the direct fisher test on the known 2x2 table
    _, p = fisher_exact(ContingencyTable(80, 10, 20, 90))
    n_tests = len({r.code for r in records})
    assert hit.p_value == pytest.approx(p, abs=1e-15)
    assert hit.p_adjusted == pytest.approx(min(1.0, p * n_tests), abs=1e-15)


def test_bonferroni_monotone_in_code_count():
    a = sets_with_code(100, "X01", 60)
    b = sets_with_code(100, "X01", 20)
    base = {r.code: r.p_adjusted for r in enrich_pairwise(a, b, alpha=0.05)}
    # sprinkle extra codes present in both groups equally
    a2 = [s | {f"N{i:02d}"} for i, s in enumerate(a)]
    b2 = [s | {f"N{i:02d}"} for i, s in enumerate(b)]
    wider = {r.code: r.p_adjusted for r in enrich_pairwise(a2, b2, alpha=0.05)}
    for code, adj in base.items():
        assert wider[code] >= adj - 1e-15


def test_empty_cluster_rejected():
    with pytest.raises(DomainError):
        enrich_pairwise([], sets_with_code(5, "X", 2), alpha=0.05)


def test_records_sorted_by_absolute_log_odds():
    a = sets_with_code(100, "X01", 80)
    b = sets_with_code(100, "X01", 10)
    a = [s | ({"Y02"} if i < 55 else set()) for i, s in enumerate(a)]
    b = [s | ({"Y02"} if i < 45 else set()) for i, s in enumerate(b)]
    records = enrich_pairwise(a, b, alpha=0.05)
    mags = [abs(r.log_odds) for r in records]
    assert mags == sorted(mags, reverse=True)


def two_level_cohort(rng):
    """4 planted clumps: top split separates classes, sub-splits subgroups."""
    n_sub = 30
    offsets = [(-8, -3), (-8, 3), (8, -3), (8, 3)]
    pts = np.vstack([rng.normal(size=(n_sub, 2)) * 0.5 + off for off in offsets])
    codes = []
    for g, off in enumerate(offsets):
        top = "T_LEFT" if off[0] < 0 else "T_RIGHT"
        for i in range(n_sub):
            s = {f"SUB_{g}"} if (i % 10) < 8 else set()
            other = {f"SUB_{(g + 1) % 4}"} if (i % 10) >= 9 else set()
            codes.append(frozenset(s | other | ({top} if i % 10 < 8 else set())))
    return pts, codes


def test_hierarchical_enrichment_recovers_planted_levels():
    rng = Rng(21)
    pts, codes = two_level_cohort(rng)
    tree = agglomerative_ward(pts)
    report = hierarchical_enrichment(tree, codes, alpha=0.05, max_depth=3, min_cluster_size=10)
    by_pair = {c.pair_label: c for c in report.comparisons}
    assert "1 vs 2" in by_pair
    top = by_pair["1 vs 2"]
    top_sig = {r.code for r in top.significant_records()}
    assert {"T_LEFT", "T_RIGHT"} & top_sig
    # subgroup codes significant somewhere below the root
    deeper_sig = set()
    for pair, comp in by_pair.items():
        if pair != "1 vs 2":
            deeper_sig |= {r.code for r in comp.significant_records()}
    assert any(code.startswith("SUB_") for code in deeper_sig)


def test_two_leaf_tree_single_comparison():
    pts = np.array([[0.0, 0.0], [5.0, 5.0]])
    tree = agglomerative_ward(pts)
    report = hierarchical_enrichment(
        tree, [frozenset({"A"}), frozenset({"B"})], alpha=0.05, min_cluster_size=1
    )
    assert len(report.comparisons) == 1
    assert report.comparisons[0].pair_label == "1 vs 2"


def test_dotted_labels_follow_parent_child_scheme():
    rng = Rng(3)
    pts, codes = two_level_cohort(rng)
    tree = agglomerative_ward(pts)
    report = hierarchical_enrichment(tree, codes, alpha=0.05, max_depth=4, min_cluster_size=5)
    labels = set(report.node_labels.values())
    for lab in labels:
        if lab and "." in lab:
            parent = lab.rsplit(".", 1)[0]
            assert parent in labels
    for comp in report.comparisons:
        assert comp.label_a.rsplit(".", 1)[: -1] == comp.label_b.rsplit(".", 1)[: -1]
        assert comp.label_a.endswith(".1") or comp.label_a == "1"
        assert comp.label_b.endswith(".2") or comp.label_b == "2"


def test_undersized_merges_skipped_and_recorded():
    rng = Rng(4)
    pts = np.vstack([rng.normal(size=(40, 2)), rng.normal(size=(3, 2)) + 50.0])
    codes = [frozenset({"C"})] * 43
    report = hierarchical_enrichment(tree=agglomerative_ward(pts), codes=codes,
                                     alpha=0.05, max_depth=2, min_cluster_size=10)
    assert report.skipped
    assert any("below 10" in reason for _, _, reason in report.skipped)


def test_csv_rows_and_table_render():
    a = sets_with_code(30, "X01", 25)
    b = sets_with_code(30, "X01", 2)
    pts = np.vstack([np.zeros((30, 2)), np.ones((30, 2)) * 9])
    tree = agglomerative_ward(pts)
    report = hierarchical_enrichment(tree, a + b, alpha=0.05, max_depth=1, min_cluster_size=10)
    rows = enrichment_csv_rows(report)
    assert rows and rows[0][0] == "1 vs 2"
    text = render_enrichment_table(report)
    assert "X01" in text and "Group" in text

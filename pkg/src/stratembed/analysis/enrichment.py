"""Diagnosis-code enrichment between clusters.

Pairwise comparisons use Fisher's exact test per distinct code with
Bonferroni correction scoped to the comparison. Hierarchical reports follow
the merge tree top-down with dotted group labels ("1", "2", "2.1", ...),
mirroring the agglomeration order.
"""

from dataclasses import dataclass, field
from math import log

from stratembed.analysis.fisher import ContingencyTable, fisher_exact
from stratembed.analysis.hierarchy import LinkageTree
from stratembed.errors import DomainError


@dataclass
class EnrichmentRecord:
    code: str
    log_odds: float
    p_value: float
    p_adjusted: float
    enriched_in: str
    significant: bool
    table: ContingencyTable


@dataclass
class MergeComparison:
    node_id: int
    label_a: str
    label_b: str
    records: list

    @property
    def pair_label(self) -> str:
        return f"{self.label_a} vs {self.label_b}"

    def significant_records(self):
        return [r for r in self.records if r.significant]


@dataclass
class HierarchicalEnrichmentReport:
    comparisons: list
    skipped: list  # (node_id, pair_label, reason)
    node_labels: dict  # node id -> dotted group label
    alpha: float
    min_cluster_size: int


def enrich_pairwise(codes_a, codes_b, alpha: float, label_a: str = "A", label_b: str = "B"):
    """One EnrichmentRecord per distinct code in either patient group.

    ``codes_a`` / ``codes_b`` are sequences of per-patient code sets. The
    Bonferroni multiplier is the number of distinct codes tested here.
    """
    n_a, n_b = len(codes_a), len(codes_b)
    if n_a == 0 or n_b == 0:
        raise DomainError("both clusters must be non-empty for enrichment")
    universe = sorted(set().union(*codes_a, *codes_b)) if (codes_a or codes_b) else []
    n_tests = len(universe)
    records = []
    for code in universe:
        a = sum(1 for s in codes_a if code in s)
        b = sum(1 for s in codes_b if code in s)
        table = ContingencyTable(a=a, b=b, c=n_a - a, d=n_b - b)
        ratio, p = fisher_exact(table)
        p_adj = min(1.0, p * n_tests)
        log_odds = log(ratio)
        records.append(
            EnrichmentRecord(
                code=code,
                log_odds=log_odds,
                p_value=p,
                p_adjusted=p_adj,
                enriched_in=label_a if log_odds >= 0 else label_b,
                significant=p_adj < alpha,
                table=table,
            )
        )
    records.sort(key=lambda r: (-abs(r.log_odds), r.code))
    return records


def hierarchical_enrichment(tree: LinkageTree, codes, alpha: float,
                            max_depth: int = 4, min_cluster_size: int = 10):
    """Per-merge pairwise enrichment walked top-down from the tree root.

    ``codes`` holds one code set per leaf. Children are labelled parent + ".1"
    / ".2" (the ".1" side contains the lowest leaf index; root children are
    "1" and "2"). Merges whose sides fall below ``min_cluster_size`` are
    skipped and recorded. ``max_depth`` bounds the dotted label depth.
    """
    if len(codes) != tree.leaf_count:
        raise DomainError(
            f"{tree.leaf_count} leaves but {len(codes)} code sets"
        )
    children = tree.children()
    members = tree.node_members()
    comparisons = []
    skipped = []
    node_labels = {}

    def visit(node_id: int, label: str):
        if node_id not in children:
            return
        left, right = children[node_id]
        # ".1" goes to the child holding the smallest leaf index
        if members[left][0] > members[right][0]:
            left, right = right, left
        lab_a = f"{label}.1" if label else "1"
        lab_b = f"{label}.2" if label else "2"
        node_labels[left] = lab_a
        node_labels[right] = lab_b
        if len(lab_a.split(".")) > max_depth:
            return
        size_a, size_b = len(members[left]), len(members[right])
        if size_a < min_cluster_size or size_b < min_cluster_size:
            skipped.append(
                (node_id, f"{lab_a} vs {lab_b}",
                 f"cluster sizes {size_a}/{size_b} below {min_cluster_size}")
            )
        else:
            records = enrich_pairwise(
                [codes[i] for i in members[left]],
                [codes[i] for i in members[right]],
                alpha, lab_a, lab_b,
            )
            comparisons.append(MergeComparison(node_id, lab_a, lab_b, records))
        visit(left, lab_a)
        visit(right, lab_b)

    node_labels[tree.root_id] = ""
    visit(tree.root_id, "")
    return HierarchicalEnrichmentReport(
        comparisons=comparisons,
        skipped=skipped,
        node_labels=node_labels,
        alpha=alpha,
        min_cluster_size=min_cluster_size,
    )


def enrichment_csv_rows(report: HierarchicalEnrichmentReport):
    """Rows for the enrichment CSV: group_path, code, log_odds, p, p_adj, side."""
    rows = []
    for comparison in report.comparisons:
        for r in comparison.records:
            rows.append(
                (comparison.pair_label, r.code, r.log_odds, r.p_value, r.p_adjusted,
                 r.enriched_in)
            )
    return rows


def render_enrichment_table(report: HierarchicalEnrichmentReport) -> str:
    """Human-readable per-group table of significant codes with log odds."""
    lines = ["Group | Enriched codes (log odds ratio)", "----- | -------------------------------"]
    for comparison in report.comparisons:
        for side_label in (comparison.label_a, comparison.label_b):
            hits = [r for r in comparison.significant_records() if r.enriched_in == side_label]
            body = ", ".join(f"{r.code} ({r.log_odds:.2f})" for r in hits) or "-"
            lines.append(f"{side_label:>5} | {body}")
    if report.skipped:
        lines.append("")
        for node_id, pair, reason in report.skipped:
            lines.append(f"skipped {pair}: {reason}")
    return "\n".join(lines)

import numpy as np
import numpy.testing as npt
import pytest

from oracles import brute_force_ward, ward_cost
from stratembed.analysis.hierarchy import LinkageTree, agglomerative_ward, cut_tree
from stratembed.errors import DomainError
from stratembed.rng import Rng


def test_one_dimensional_first_merge():
    # {0, 1, 10}: merging 0 and 1 costs 0.5, far cheaper than any pair with 10
    pts = np.array([[0.0], [1.0], [10.0]])
    tree = agglomerative_ward(pts)
    left, right, dist, new_id = tree.merges[0]
    assert (left, right) == (0, 1)
    npt.assert_allclose(dist, 0.5)
    assert new_id == 3
    assert ward_cost(pts, (0,), (1,)) == 0.5


def test_duplicated_points_merge_at_zero_distance():
    pts = np.tile([[2.0, -1.0]], (5, 1))
    tree = agglomerative_ward(pts)
    assert all(m[2] == 0.0 for m in tree.merges)


def test_matches_brute_force_oracle_small_instances():
    for trial in range(60):
        rng = Rng(1000 + trial)
        n = int(rng.integers(3, 8))
        pts = rng.normal(size=(n, int(rng.integers(1, 4))))
        if trial % 5 == 0:
            pts[1] = pts[0]  # provoke ties
        tree = agglomerative_ward(pts)
        oracle_merges, oracle_dists = brute_force_ward(pts)
        got = np.array([(m[0], m[1], m[3]) for m in tree.merges])
        npt.assert_array_equal(got, oracle_merges, err_msg=f"trial {trial}")
        npt.assert_allclose([m[2] for m in tree.merges], oracle_dists, rtol=1e-9, atol=1e-12)


def test_merge_distances_non_decreasing():
    rng = Rng(2)
    pts = rng.normal(size=(80, 3))
    tree = agglomerative_ward(pts)
    dists = np.array([m[2] for m in tree.merges])
    assert (np.diff(dists) >= -1e-9).all()


def test_fewer_than_two_points_rejected():
    with pytest.raises(DomainError):
        agglomerative_ward(np.zeros((1, 2)))


def test_cut_tree_extremes_and_example():
    pts = np.array([[0.0], [1.0], [10.0]])
    tree = agglomerative_ward(pts)
    assert cut_tree(tree, 1).labels.tolist() == [0, 0, 0]
    assert cut_tree(tree, 3).labels.tolist() == [0, 1, 2]
    two = cut_tree(tree, 2).labels
    assert two[0] == two[1] != two[2]


def test_cut_tree_out_of_range():
    tree = agglomerative_ward(np.array([[0.0], [1.0]]))
    with pytest.raises(DomainError):
        cut_tree(tree, 0)
    with pytest.raises(DomainError):
        cut_tree(tree, 3)


def test_cuts_nest():
    rng = Rng(8)
    pts = rng.normal(size=(30, 2))
    tree = agglomerative_ward(pts)
    for k in range(2, 30):
        coarse = cut_tree(tree, k - 1).labels
        fine = cut_tree(tree, k).labels
        # every fine cluster maps into exactly one coarse cluster
        for fid in range(k):
            owners = np.unique(coarse[fine == fid])
            assert len(owners) == 1


def test_invalid_tree_structures_rejected():
    with pytest.raises(DomainError, match="merges"):
        LinkageTree([(0, 1, 0.0, 3)], 3)
    with pytest.raises(DomainError, match="reused"):
        LinkageTree([(0, 1, 0.0, 3), (1, 3, 1.0, 4)], 3)
    with pytest.raises(DomainError, match="decreased"):
        LinkageTree([(0, 1, 5.0, 3), (2, 3, 1.0, 4)], 3)


def test_node_members_cover_leaves():
    rng = Rng(12)
    pts = rng.normal(size=(12, 2))
    tree = agglomerative_ward(pts)
    members = tree.node_members()
    npt.assert_array_equal(members[tree.root_id], np.arange(12))
    for left, right, _, new_id in tree.merges:
        merged = np.sort(np.concatenate([members[left], members[right]]))
        npt.assert_array_equal(members[new_id], merged)

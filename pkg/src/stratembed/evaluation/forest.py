"""Random forest with Gini splits, built on bootstrap samples.

Trees are grown depth-first over arrays (feature, threshold, children, leaf
probability). Per-tree randomness comes from substreams derived off the
forest seed by tree index, so serial and parallel training agree exactly.
"""

from dataclasses import dataclass

import numpy as np

from stratembed.errors import DomainError
from stratembed.nn.layers import as_matrix
from stratembed.rng import Rng


@dataclass
class _Tree:
    feature: np.ndarray  # -1 marks a leaf
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    prob: np.ndarray  # positive-class probability at leaves


@dataclass
class ForestModel:
    trees: list
    n_trees: int
    max_depth: int
    seed_label: str


def _gini_best_split(x, y, feature_ids):
    """Lowest weighted Gini impurity over midpoint thresholds; None if unsplittable."""
    n = len(y)
    total_pos = y.sum()
    best = None
    for f in feature_ids:
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        ys = y[order]
        valid = np.flatnonzero(xs[:-1] != xs[1:])
        if len(valid) == 0:
            continue
        n_left = valid + 1.0
        pos_left = np.cumsum(ys)[valid]
        n_right = n - n_left
        pos_right = total_pos - pos_left
        p_l = pos_left / n_left
        p_r = pos_right / n_right
        score = (n_left * 2 * p_l * (1 - p_l) + n_right * 2 * p_r * (1 - p_r)) / n
        i = int(np.argmin(score))
        cand = (float(score[i]), int(f), float((xs[valid[i]] + xs[valid[i] + 1]) / 2.0))
        if best is None or cand[0] < best[0]:
            best = cand
    return best


def _grow_tree(x, y, max_depth, n_sub_features, rng):
    feature, threshold, left, right, prob = [], [], [], [], []

    def add_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        prob.append(0.0)
        return len(feature) - 1

    def build(idx, depth):
        node = add_node()
        ys = y[idx]
        p = float(ys.mean())
        if depth >= max_depth or len(idx) < 2 or p == 0.0 or p == 1.0:
            prob[node] = p
            return node
        d = x.shape[1]
        chosen = np.sort(rng.permutation(d)[:n_sub_features])
        found = _gini_best_split(x[idx], ys, chosen)
        if found is None:  # constant features in this node
            prob[node] = p
            return node
        _, f, thr = found
        go_left = x[idx, f] <= thr
        feature[node] = f
        threshold[node] = thr
        left[node] = build(idx[go_left], depth + 1)
        right[node] = build(idx[~go_left], depth + 1)
        return node

    build(np.arange(len(y)), 0)
    return _Tree(
        np.array(feature, dtype=np.int64),
        np.array(threshold),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(prob),
    )


def forest_train(features, labels, n_trees: int = 100, max_depth: int = 8,
                 rng: Rng = None, max_features: str = "sqrt",
                 bootstrap: bool = True) -> ForestModel:
    """Fit ``n_trees`` Gini trees; per-split feature subsets default to sqrt(d)."""
    x = as_matrix(features)
    y = np.asarray(labels, dtype=np.float64).reshape(-1)
    if not np.isin(y, (0.0, 1.0)).all():
        raise DomainError("labels must be binary (0/1)")
    if min((y == 1).sum(), (y == 0).sum()) < 2:
        raise DomainError("need at least 2 samples of each class")
    if rng is None:
        rng = Rng(0)
    d = x.shape[1]
    n_sub = d if max_features is None else max(1, int(np.sqrt(d)))
    trees = []
    for t in range(n_trees):
        tree_rng = rng.derive(f"tree-{t}")
        if bootstrap:
            idx = tree_rng.integers(0, len(y), size=len(y))
        else:
            idx = np.arange(len(y))
        xt, yt = x[idx], y[idx]
        if yt.mean() in (0.0, 1.0):  # degenerate bootstrap: single leaf
            trees.append(
                _Tree(np.array([-1]), np.array([0.0]), np.array([-1]),
                      np.array([-1]), np.array([float(yt.mean())]))
            )
            continue
        trees.append(_grow_tree(xt, yt, max_depth, n_sub, tree_rng))
    return ForestModel(trees, n_trees, max_depth, seed_label=f"rng:{rng.seed}")


def forest_predict(model: ForestModel, features) -> np.ndarray:
    """Mean positive-class leaf probability across trees, in [0, 1]."""
    x = as_matrix(features)
    scores = np.zeros(x.shape[0])
    for tree in model.trees:
        node_of = np.zeros(x.shape[0], dtype=np.int64)
        active = tree.feature[node_of] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            nodes = node_of[rows]
            go_left = x[rows, tree.feature[nodes]] <= tree.threshold[nodes]
            node_of[rows[go_left]] = tree.left[nodes[go_left]]
            node_of[rows[~go_left]] = tree.right[nodes[~go_left]]
            active = tree.feature[node_of] >= 0
        scores += tree.prob[node_of]
    return scores / len(model.trees)

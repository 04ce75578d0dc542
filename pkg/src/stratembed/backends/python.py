"""Pure numpy implementations of the hot kernels.

These are the reference semantics for the compiled backend in
``_native.pyx``; both expose the same four functions and must produce the
same results up to floating-point rounding (merge sequences and tie-breaks
are required to match exactly). Dense-layer matrix products are not kernels:
they stay on numpy's BLAS in every backend, where a hand-rolled loop cannot
compete.
"""

import numpy as np

NAME = "python"


def adam_step(param, grad, m, v, step, lr, beta1, beta2, eps):
    """One bias-corrected Adam update, in place on 1-d float64 views."""
    m[:] = beta1 * m + (1.0 - beta1) * grad
    v[:] = beta2 * v + (1.0 - beta2) * grad * grad
    c1 = 1.0 - beta1**step
    c2 = 1.0 - beta2**step
    param -= lr * (m / c1) / (np.sqrt(v / c2) + eps)


def pairwise_sqdist(x, c):
    """Squared Euclidean distances, shape (n_rows(x), n_rows(c))."""
    diff = x[:, None, :] - c[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def soft_assign(z, centroids, alpha):
    """Student-t kernel similarities normalized per row.

    q_ij = (1 + |z_i - mu_j|^2 / alpha)^(-(alpha+1)/2), rows normalized to 1.
    """
    d = pairwise_sqdist(z, centroids)
    w = (1.0 + d / alpha) ** (-(alpha + 1.0) / 2.0)
    return w / w.sum(axis=1, keepdims=True)


def ward_linkage(points):
    """Agglomerative Ward merge sequence via the Lance-Williams recurrence.

    Distances are increases in total within-cluster sum of squares. Returns
    ``(merges, dists)`` where merges is an int64 (n-1, 3) array of
    ``[left_id, right_id, new_id]`` rows (leaf ids 0..n-1, then n, n+1, ...,
    left_id < right_id) and dists the merge costs. Minimal-cost ties are
    broken by the lexicographically smallest (left_id, right_id) pair.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    sq = np.einsum("ij,ij->i", pts, pts)
    d = 0.5 * np.maximum(sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T), 0.0)
    np.fill_diagonal(d, np.inf)

    ids = np.arange(n, dtype=np.int64)
    sizes = np.ones(n, dtype=np.int64)
    merges = np.empty((n - 1, 3), dtype=np.int64)
    dists = np.empty(n - 1, dtype=np.float64)

    a = n  # slots 0..a-1 stay compacted and active
    for step in range(n - 1):
        sub = d[:a, :a]
        mval = sub.min()
        cand = np.argwhere(sub == mval)
        cand = cand[cand[:, 0] < cand[:, 1]]
        pair_ids = np.sort(ids[cand], axis=1)
        order = np.lexsort((pair_ids[:, 1], pair_ids[:, 0]))
        i, j = cand[order[0]]

        left, right = sorted((int(ids[i]), int(ids[j])))
        merges[step] = (left, right, n + step)
        dists[step] = mval

        si, sj = sizes[i], sizes[j]
        sk = sizes[:a]
        new_row = ((si + sk) * d[i, :a] + (sj + sk) * d[j, :a] - sk * mval) / (si + sj + sk)
        d[i, :a] = new_row
        d[:a, i] = new_row
        d[i, i] = np.inf
        ids[i] = n + step
        sizes[i] = si + sj

        last = a - 1
        if j != last:  # move the last active slot into the freed one
            d[j, :a] = d[last, :a]
            d[:a, j] = d[:a, last]
            d[j, j] = np.inf
            ids[j] = ids[last]
            sizes[j] = sizes[last]
        a -= 1

    return merges, dists

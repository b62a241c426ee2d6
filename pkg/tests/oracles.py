"""Independent reference computations used by the tests."""

import itertools
import math
from collections import Counter

import numpy as np


def leverage_eigh(data, share=0.8, tol=1e-9):
    """Row leverage from the eigendecomposition of M M^T (sigma_i^2, u_i)."""
    a = np.asarray(data, dtype=float)
    vals, vecs = np.linalg.eigh(a @ a.T)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    k = min(a.shape)
    sigma = [math.sqrt(v) for v in vals[:k]]
    total = sum(sigma)
    acc, r = 0.0, 0
    for s in sigma:
        acc += s
        r += 1
        if acc >= share * total - tol * total:
            break
    while r < k and abs(sigma[r] - sigma[r - 1]) <= tol * max(sigma[0], 1.0):
        r += 1
    lev = (vecs[:, :r] ** 2).sum(axis=1) / r
    return lev, r


def cocitation_weights(papers):
    """Pair weights from explicit per-paper reference lists."""
    w = Counter()
    for refs in papers:
        for a, b in itertools.combinations(sorted(set(refs)), 2):
            w[(a, b)] += 1
    return w


def cohesion_pairs(members, links):
    """Ordered-pair count: pairs (i, j), i != j, with i citing j."""
    members = list(set(members))
    n = len(members)
    hit = sum(1 for i in members for j in members if i != j and (i, j) in links)
    return hit / (n * (n - 1))

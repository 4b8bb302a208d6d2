"""Brute-force reference implementations used to check the fast code paths."""

import math

import numpy as np


def pairwise_auc(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    wins = 0.0
    for p in pos:
        for n in neg:
            wins += 1.0 if p > n else 0.5 if p == n else 0.0
    return wins / (len(pos) * len(neg))


def roc_by_threshold(scores, labels):
    """(threshold, tpr, fpr) at +inf and at every distinct score, descending."""
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=float)
    n_pos, n_neg = int(y.sum()), int((1 - y).sum())
    out = []
    for t in [math.inf, *sorted(set(s.tolist()), reverse=True)]:
        pred = s >= t
        out.append((t, int((pred & (y == 1)).sum()) / n_pos, int((pred & (y == 0)).sum()) / n_neg))
    return out


def gini(c0, c1):
    n = c0 + c1
    return 1.0 - (c0 / n) ** 2 - (c1 / n) ** 2


def entropy(c0, c1):
    n = c0 + c1
    return -sum(p * math.log2(p) for p in (c0 / n, c1 / n) if p > 0)


def exhaustive_split(X, y, criterion="gini", min_leaf=1):
    """Best (feature, midpoint threshold, delta) by direct enumeration.

    Ties keep the first candidate met, i.e. lowest feature then lowest
    threshold. Returns None for a pure node or when no admissible split exists.
    """
    imp = gini if criterion == "gini" else entropy
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n = len(y)
    c1 = int(y.sum())
    parent = imp(n - c1, c1)
    if parent == 0.0:
        return None
    best = None
    for f in range(X.shape[1]):
        vals = sorted(set(X[:, f].tolist()))
        for a, b in zip(vals, vals[1:]):
            t = (a + b) / 2.0
            left = X[:, f] <= t
            nl = int(left.sum())
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            l1 = int(y[left].sum())
            r1 = c1 - l1
            d = parent - nl / n * imp(nl - l1, l1) - nr / n * imp(nr - r1, r1)
            if best is None or d > best[2] + 1e-12:
                best = (f, t, d)
    return best


def paths_to_leaves(tree):
    """Yield (leaf_index, depth) pairs by walking the node arrays."""
    stack = [(0, 0)]
    while stack:
        i, d = stack.pop()
        if tree.feature[i] < 0:
            yield i, d
        else:
            stack.append((int(tree.left[i]), d + 1))
            stack.append((int(tree.right[i]), d + 1))

"""Binary CART classifier grown from scratch.

The hot loops (node splitting, growth, pruning, routing) are numba kernels
operating on flat node arrays; the Python layer validates hyperparameters and
wraps the arrays in an immutable :class:`DecisionTree`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from numbers import Integral, Real
from typing import Iterator, NamedTuple, Optional, Union

import numpy as np
from numba import njit

GINI, ENTROPY = 0, 1
BEST, RANDOM = 0, 1

# Gains closer than this are treated as tied (lowest feature, then lowest
# threshold wins).
TIE_EPS = 1e-12

_CRITERIA = {"gini": GINI, "entropy": ENTROPY}
_SPLITTERS = {"best": BEST, "random": RANDOM}
_MAX_FEATURES = ("sqrt", "log2", "all")


def _is_int(value) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool)


@dataclass(frozen=True)
class TreeHyperparams:
    criterion: str = "gini"
    splitter: str = "best"
    max_depth: Optional[int] = None
    min_samples_split: Union[int, float] = 2
    min_samples_leaf: Union[int, float] = 1
    min_weight_fraction_leaf: float = 0.0
    max_features: Union[str, int] = "all"
    max_leaf_nodes: Optional[int] = None
    min_impurity_decrease: float = 0.0
    ccp_alpha: float = 0.0
    random_state: int = 0

    def __post_init__(self):
        if self.criterion not in _CRITERIA:
            raise ValueError(f"criterion must be 'gini' or 'entropy', got {self.criterion!r}")
        if self.splitter not in _SPLITTERS:
            raise ValueError(f"splitter must be 'best' or 'random', got {self.splitter!r}")
        if self.max_depth is not None and not (_is_int(self.max_depth) and self.max_depth >= 1):
            raise ValueError(f"max_depth must be a positive integer or None, got {self.max_depth!r}")

        mss = self.min_samples_split
        if _is_int(mss):
            if mss < 2:
                raise ValueError(f"integer min_samples_split must be >= 2, got {mss}")
        elif isinstance(mss, Real) and not isinstance(mss, bool):
            if not 0.0 < mss <= 1.0:
                raise ValueError(f"fractional min_samples_split must lie in (0, 1], got {mss}")
        else:
            raise ValueError(f"min_samples_split must be int or float, got {mss!r}")

        msl = self.min_samples_leaf
        if _is_int(msl):
            if msl < 1:
                raise ValueError(f"integer min_samples_leaf must be >= 1, got {msl}")
        elif isinstance(msl, Real) and not isinstance(msl, bool):
            if not 0.0 < msl <= 0.5:
                raise ValueError(f"fractional min_samples_leaf must lie in (0, 0.5], got {msl}")
        else:
            raise ValueError(f"min_samples_leaf must be int or float, got {msl!r}")

        if not 0.0 <= self.min_weight_fraction_leaf <= 0.5:
            raise ValueError("min_weight_fraction_leaf must lie in [0, 0.5]")

        mf = self.max_features
        if mf is None or mf == "none":
            object.__setattr__(self, "max_features", "all")
        elif isinstance(mf, str):
            if mf not in _MAX_FEATURES:
                raise ValueError(f"max_features must be one of {_MAX_FEATURES} or an int, got {mf!r}")
        elif not (_is_int(mf) and mf >= 1):
            raise ValueError(f"integer max_features must be >= 1, got {mf!r}")

        if self.max_leaf_nodes is not None and not (_is_int(self.max_leaf_nodes) and self.max_leaf_nodes >= 2):
            raise ValueError(f"max_leaf_nodes must be an integer >= 2 or None, got {self.max_leaf_nodes!r}")
        if not self.min_impurity_decrease >= 0.0:
            raise ValueError("min_impurity_decrease must be >= 0")
        if not self.ccp_alpha >= 0.0:
            raise ValueError("ccp_alpha must be >= 0")
        if not _is_int(self.random_state) or not 0 <= self.random_state < 2**64:
            raise ValueError("random_state must be an unsigned 64-bit integer")

    def resolve(self, n_samples: int, n_features: int) -> "ResolvedParams":
        """Turn fractions and keywords into the integer limits used while growing."""
        mss = self.min_samples_split
        min_split = mss if _is_int(mss) else max(2, math.ceil(mss * n_samples))
        msl = self.min_samples_leaf
        min_leaf = msl if _is_int(msl) else math.ceil(msl * n_samples)
        # uniform weights 1/N: weight fraction floor becomes a sample-count floor
        weight_leaf = math.ceil(self.min_weight_fraction_leaf * n_samples - 1e-9)
        min_leaf = max(min_leaf, weight_leaf, 1)

        mf = self.max_features
        if mf == "all":
            k = n_features
        elif mf == "sqrt":
            k = math.ceil(math.sqrt(n_features))
        elif mf == "log2":
            k = math.ceil(math.log2(n_features)) if n_features > 1 else 1
        else:
            if mf > n_features:
                raise ValueError(f"max_features={mf} exceeds the {n_features} available features")
            k = mf
        return ResolvedParams(
            criterion=_CRITERIA[self.criterion],
            splitter=_SPLITTERS[self.splitter],
            max_depth=-1 if self.max_depth is None else self.max_depth,
            min_samples_split=min_split,
            min_samples_leaf=min_leaf,
            max_features=max(1, min(k, n_features)),
            max_leaf_nodes=-1 if self.max_leaf_nodes is None else self.max_leaf_nodes,
            min_impurity_decrease=float(self.min_impurity_decrease),
            seed=self.random_state & 0xFFFFFFFF,
        )


class ResolvedParams(NamedTuple):
    criterion: int
    splitter: int
    max_depth: int
    min_samples_split: int
    min_samples_leaf: int
    max_features: int
    max_leaf_nodes: int
    min_impurity_decrease: float
    seed: int


def impurity(class_counts, criterion: str = "gini") -> float:
    n0, n1 = class_counts
    if n0 < 0 or n1 < 0:
        raise ValueError("class counts must be non-negative")
    if n0 + n1 == 0:
        raise ValueError("impurity of an empty node is undefined")
    return _impurity(n0, n1, _CRITERIA[criterion])


# -- numba kernels -----------------------------------------------------------


@njit(cache=True, nogil=True)
def _impurity(c0, c1, criterion):
    n = c0 + c1
    p0 = c0 / n
    p1 = c1 / n
    if criterion == GINI:
        return 1.0 - p0 * p0 - p1 * p1
    h = 0.0
    if p0 > 0.0:
        h -= p0 * math.log2(p0)
    if p1 > 0.0:
        h -= p1 * math.log2(p1)
    return h


@njit(cache=True, nogil=True)
def _seed_rng(seed):
    np.random.seed(seed)


@njit(cache=True, nogil=True)
def _argsort_columns(XT):
    d = XT.shape[0]
    order = np.empty(XT.shape, dtype=np.int64)
    for f in range(d):
        order[f] = np.argsort(XT[f], kind="mergesort")
    return order


@njit(cache=True, nogil=True)
def _presort(order_all, idx):
    """Per-feature rows of ``idx`` sorted by that feature's value.

    ``order_all`` is the column-wise argsort of the full matrix; filtering it
    by membership avoids sorting again for every training subset.
    """
    d, n_all = order_all.shape
    member = np.zeros(n_all, dtype=np.bool_)
    for s in idx:
        member[s] = True
    rows = np.empty((d, idx.shape[0]), dtype=np.int64)
    for f in range(d):
        k = 0
        src = order_all[f]
        for i in range(n_all):
            s = src[i]
            if member[s]:
                rows[f, k] = s
                k += 1
    return rows


@njit(cache=True, nogil=True)
def _child_cost(l0, l1, r0, r1, n, criterion):
    """Sample-weighted child impurity (n_L/n) I(L) + (n_R/n) I(R)."""
    nl = l0 + l1
    nr = r0 + r1
    if criterion == GINI:
        return (nl - (l0 * l0 + l1 * l1) / nl + nr - (r0 * r0 + r1 * r1) / nr) / n
    return nl / n * _impurity(l0, l1, criterion) + nr / n * _impurity(r0, r1, criterion)


@njit(cache=True, nogil=True)
def _split_node(XT, y, rows, start, end, n_total, criterion, splitter,
                min_leaf, max_features, min_impurity_decrease):
    """Best admissible (feature, threshold, weighted gain) for one node.

    ``rows[f, start:end]`` holds the node's samples sorted by feature ``f``.
    Returns feature -1 when the node has no admissible split.
    """
    n = end - start
    c1 = 0
    for i in range(start, end):
        c1 += y[rows[0, i]]
    c0 = n - c1
    if c0 == 0 or c1 == 0 or n < 2 * min_leaf:
        return -1, 0.0, 0.0

    d = XT.shape[0]
    if max_features < d:
        feats = np.sort(np.random.permutation(d)[:max_features])
    else:
        feats = np.arange(d)

    parent = _impurity(c0, c1, criterion)
    best_f = -1
    best_thr = 0.0
    best_gain = -np.inf

    for f in feats:
        xf = XT[f]
        seg = rows[f]
        if splitter == BEST:
            left1 = 0
            for i in range(min_leaf - 1):
                left1 += y[seg[start + i]]
            for i in range(min_leaf - 1, n - min_leaf):
                s = seg[start + i]
                left1 += y[s]
                lo = xf[s]
                hi = xf[seg[start + i + 1]]
                if hi <= lo:
                    continue
                nl = i + 1
                gain = parent - _child_cost(nl - left1, left1, c0 - nl + left1, c1 - left1,
                                            n, criterion)
                if gain > best_gain + TIE_EPS:
                    thr = (lo + hi) / 2.0
                    if thr >= hi:
                        thr = lo
                    best_gain = gain
                    best_f = f
                    best_thr = thr
        else:
            vmin = xf[seg[start]]
            vmax = xf[seg[end - 1]]
            if vmax <= vmin:
                continue
            thr = vmin + (vmax - vmin) * np.random.random()
            if thr >= vmax:
                thr = vmin
            nl = 0
            left1 = 0
            for i in range(start, end):
                s = seg[i]
                if xf[s] > thr:
                    break
                nl += 1
                left1 += y[s]
            if nl < min_leaf or n - nl < min_leaf:
                continue
            gain = parent - _child_cost(nl - left1, left1, c0 - nl + left1, c1 - left1,
                                        n, criterion)
            if gain > best_gain + TIE_EPS:
                best_gain = gain
                best_f = f
                best_thr = thr

    if best_f < 0:
        return -1, 0.0, 0.0
    weighted = n / n_total * max(best_gain, 0.0)
    if weighted < min_impurity_decrease:
        return -1, 0.0, 0.0
    return best_f, best_thr, weighted


@njit(cache=True, nogil=True)
def _grow(XT, y, idx, order_all, criterion, splitter, max_depth, min_split, min_leaf,
          max_features, max_leaf_nodes, min_impurity_decrease, seed):
    np.random.seed(seed)
    n_total = idx.shape[0]
    d = XT.shape[0]
    cap = 2 * n_total + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    cnt0 = np.zeros(cap, dtype=np.int64)
    cnt1 = np.zeros(cap, dtype=np.int64)
    depth = np.zeros(cap, dtype=np.int64)
    gain = np.zeros(cap)
    start = np.zeros(cap, dtype=np.int64)
    end = np.zeros(cap, dtype=np.int64)
    cand_f = np.full(cap, -1, dtype=np.int64)
    cand_t = np.zeros(cap)
    cand_g = np.zeros(cap)

    rows = _presort(order_all, idx)
    goes_left = np.zeros(XT.shape[1], dtype=np.bool_)
    buf = np.empty(n_total, dtype=np.int64)
    best_first = max_leaf_nodes > 0

    c1 = 0
    for i in range(n_total):
        c1 += y[idx[i]]
    cnt0[0] = n_total - c1
    cnt1[0] = c1
    end[0] = n_total
    n_nodes = 1

    frontier = np.empty(cap, dtype=np.int64)
    n_front = 0
    if n_total >= min_split:
        f, t, g = _split_node(XT, y, rows, 0, n_total, n_total, criterion, splitter,
                              min_leaf, max_features, min_impurity_decrease)
        if f >= 0:
            cand_f[0] = f
            cand_t[0] = t
            cand_g[0] = g
            frontier[0] = 0
            n_front = 1
    n_leaves = 1

    while n_front > 0:
        if best_first:
            if n_leaves >= max_leaf_nodes:
                break
            pos = 0
            for k in range(1, n_front):
                a = frontier[k]
                b = frontier[pos]
                if cand_g[a] > cand_g[b] or (cand_g[a] == cand_g[b] and a < b):
                    pos = k
            node = frontier[pos]
            for k in range(pos, n_front - 1):
                frontier[k] = frontier[k + 1]
            n_front -= 1
        else:
            n_front -= 1
            node = frontier[n_front]

        f = cand_f[node]
        t = cand_t[node]
        s0 = start[node]
        s1 = end[node]
        nl = 0
        for i in range(s0, s1):
            s = rows[0, i]
            goes_left[s] = XT[f, s] <= t
            if goes_left[s]:
                nl += 1
        # stable partition keeps every feature row sorted within each child
        for g_ in range(d):
            seg = rows[g_]
            a = 0
            b = nl
            for i in range(s0, s1):
                s = seg[i]
                if goes_left[s]:
                    buf[a] = s
                    a += 1
                else:
                    buf[b] = s
                    b += 1
            for i in range(s1 - s0):
                seg[s0 + i] = buf[i]

        feature[node] = f
        threshold[node] = t
        gain[node] = cand_g[node]
        lc = n_nodes
        rc = n_nodes + 1
        n_nodes += 2
        left[node] = lc
        right[node] = rc
        n_leaves += 1
        start[lc] = s0
        end[lc] = s0 + nl
        start[rc] = s0 + nl
        end[rc] = s1
        for child in (lc, rc):
            c1 = 0
            for i in range(start[child], end[child]):
                c1 += y[rows[0, i]]
            cnt1[child] = c1
            cnt0[child] = end[child] - start[child] - c1
            depth[child] = depth[node] + 1
            nc = end[child] - start[child]
            if (max_depth < 0 or depth[child] < max_depth) and nc >= min_split:
                cf, ct, cg = _split_node(XT, y, rows, start[child], end[child], n_total,
                                         criterion, splitter, min_leaf, max_features,
                                         min_impurity_decrease)
                cand_f[child] = cf
                cand_t[child] = ct
                cand_g[child] = cg
        if best_first:
            for child in (lc, rc):
                if cand_f[child] >= 0:
                    frontier[n_front] = child
                    n_front += 1
        else:
            # right pushed first so the stack expands the left child next
            for child in (rc, lc):
                if cand_f[child] >= 0:
                    frontier[n_front] = child
                    n_front += 1

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), cnt0[:n_nodes].copy(), cnt1[:n_nodes].copy(),
            depth[:n_nodes].copy(), gain[:n_nodes].copy())


@njit(cache=True, nogil=True)
def _prune(feature, left, right, cnt0, cnt1, n_total, alpha):
    """Weakest-link pruning; returns the feature array with collapsed nodes set to -1."""
    feature = feature.copy()
    m = feature.shape[0]
    err = np.minimum(cnt0, cnt1)
    sub_err = np.zeros(m, dtype=np.int64)
    sub_leaves = np.zeros(m, dtype=np.int64)
    reach = np.zeros(m, dtype=np.bool_)
    depth = np.zeros(m, dtype=np.int64)
    while True:
        reach[:] = False
        reach[0] = True
        for t in range(m):
            if reach[t] and feature[t] >= 0:
                reach[left[t]] = True
                reach[right[t]] = True
                depth[left[t]] = depth[t] + 1
                depth[right[t]] = depth[t] + 1
        # children always carry larger ids than their parent
        for t in range(m - 1, -1, -1):
            if feature[t] < 0:
                sub_err[t] = err[t]
                sub_leaves[t] = 1
            else:
                sub_err[t] = sub_err[left[t]] + sub_err[right[t]]
                sub_leaves[t] = sub_leaves[left[t]] + sub_leaves[right[t]]
        best = -1
        best_g = np.inf
        for t in range(m):
            if not reach[t] or feature[t] < 0:
                continue
            g = (err[t] - sub_err[t]) / (n_total * (sub_leaves[t] - 1))
            if g < best_g or (g == best_g and depth[t] > depth[best]):
                best = t
                best_g = g
        if best < 0 or best_g > alpha:
            break
        feature[best] = -1
    return feature


@njit(cache=True, nogil=True)
def _compact(feature, threshold, left, right, cnt0, cnt1, depth, gain):
    """Drop unreachable nodes, relabelling in preorder."""
    m = feature.shape[0]
    new_id = np.full(m, -1, dtype=np.int64)
    order = np.empty(m, dtype=np.int64)
    stack = np.empty(m, dtype=np.int64)
    top = 1
    stack[0] = 0
    k = 0
    while top > 0:
        top -= 1
        t = stack[top]
        new_id[t] = k
        order[k] = t
        k += 1
        if feature[t] >= 0:
            stack[top] = right[t]
            stack[top + 1] = left[t]
            top += 2
    order = order[:k]
    nf = feature[order].copy()
    nl = np.full(k, -1, dtype=np.int64)
    nr = np.full(k, -1, dtype=np.int64)
    ng = gain[order].copy()
    nt = threshold[order].copy()
    for i in range(k):
        t = order[i]
        if feature[t] >= 0:
            nl[i] = new_id[left[t]]
            nr[i] = new_id[right[t]]
        else:
            ng[i] = 0.0
            nt[i] = 0.0
    return nf, nt, nl, nr, cnt0[order].copy(), cnt1[order].copy(), depth[order].copy(), ng


@njit(cache=True, nogil=True)
def _route(feature, threshold, left, right, X):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        t = 0
        while feature[t] >= 0:
            if X[i, feature[t]] <= threshold[t]:
                t = left[t]
            else:
                t = right[t]
        out[i] = t
    return out


# -- Python surface ----------------------------------------------------------


class Split(NamedTuple):
    feature: int
    threshold: float
    gain: float


@dataclass(frozen=True)
class Leaf:
    class_counts: tuple
    depth: int

    @property
    def prediction(self) -> int:
        n0, n1 = self.class_counts
        return 1 if n1 > n0 else 0


@dataclass(frozen=True)
class Internal:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


def _as_xt(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("feature matrix must be two-dimensional")
    return np.ascontiguousarray(X.T)


def find_split(X, y, sample_indices, hyperparams: TreeHyperparams, seed: Optional[int] = None,
               n_total: Optional[int] = None) -> Optional[Split]:
    """Evaluate one node the way :func:`fit` does.

    ``seed`` seeds the node RNG (feature subsets, random thresholds); it
    defaults to ``hyperparams.random_state``. ``n_total`` is the training size
    used to weight the gain and defaults to the node size.
    """
    XT = _as_xt(X)
    y = np.asarray(y, dtype=np.int64)
    samples = np.asarray(sample_indices, dtype=np.int64)
    n = samples.shape[0]
    if n == 0:
        return None
    n_total = n if n_total is None else n_total
    p = hyperparams.resolve(n_total, XT.shape[0])
    if n < p.min_samples_split:
        return None
    rows = _presort(_argsort_columns(XT), samples)
    _seed_rng(p.seed if seed is None else seed & 0xFFFFFFFF)
    f, t, g = _split_node(XT, y, rows, 0, n, n_total, p.criterion, p.splitter,
                          p.min_samples_leaf, p.max_features, p.min_impurity_decrease)
    if f < 0:
        return None
    return Split(int(f), float(t), float(g))


def best_split(X, y, sample_indices, hyperparams: TreeHyperparams, seed=None, n_total=None):
    """Exhaustive midpoint search over the candidate features."""
    return find_split(X, y, sample_indices, replace(hyperparams, splitter="best"), seed, n_total)


def random_split(X, y, sample_indices, hyperparams: TreeHyperparams, seed=None, n_total=None):
    """One uniformly drawn threshold per candidate feature; the best of those wins."""
    return find_split(X, y, sample_indices, replace(hyperparams, splitter="random"), seed, n_total)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """A fitted tree stored as parallel node arrays (node 0 is the root).

    ``feature[i] == -1`` marks a leaf. ``gain[i]`` is the weighted impurity
    decrease ``n_i / N * delta`` realised by the split at node ``i``.
    """

    hyperparams: TreeHyperparams
    n_features: int
    training_size: int
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    n0: np.ndarray
    n1: np.ndarray
    node_depth: np.ndarray
    gain: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    @property
    def is_leaf(self) -> np.ndarray:
        return self.feature < 0

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.feature < 0))

    @property
    def depth(self) -> int:
        return int(self.node_depth.max())

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ValueError(f"expected rows with {self.n_features} features, got shape {X.shape}")
        return X

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by each row."""
        return _route(self.feature, self.threshold, self.left, self.right, self._check(X))

    def predict(self, X) -> np.ndarray:
        leaves = self.apply(X)
        return (self.n1[leaves] > self.n0[leaves]).astype(np.int64)

    def predict_proba(self, X) -> np.ndarray:
        """Fraction of class-1 training samples in the reached leaf."""
        leaves = self.apply(X)
        return self.n1[leaves] / (self.n0[leaves] + self.n1[leaves])

    def root(self) -> TreeNode:
        def build(i):
            if self.feature[i] < 0:
                return Leaf((int(self.n0[i]), int(self.n1[i])), int(self.node_depth[i]))
            return Internal(int(self.feature[i]), float(self.threshold[i]),
                            build(self.left[i]), build(self.right[i]))

        return build(0)

    def iter_nodes(self) -> Iterator[tuple]:
        for i in range(self.n_nodes):
            yield i, int(self.feature[i]), float(self.threshold[i]), int(self.n0[i]), int(self.n1[i])

    def dump(self) -> str:
        """Plain-text dump, one node per line: id, feature, threshold, counts, children."""
        lines = ["id\tdepth\tfeature\tthreshold\tn0\tn1\tleft\tright"]
        for i in range(self.n_nodes):
            if self.feature[i] < 0:
                lines.append(f"{i}\t{self.node_depth[i]}\tleaf\t-\t{self.n0[i]}\t{self.n1[i]}\t-\t-")
            else:
                lines.append(f"{i}\t{self.node_depth[i]}\t{self.feature[i]}\t{self.threshold[i]!r}\t"
                             f"{self.n0[i]}\t{self.n1[i]}\t{self.left[i]}\t{self.right[i]}")
        return "\n".join(lines) + "\n"

    def same_structure(self, other: "DecisionTree") -> bool:
        names = ("feature", "threshold", "left", "right", "n0", "n1", "node_depth")
        return all(np.array_equal(getattr(self, a), getattr(other, a)) for a in names)


@dataclass(frozen=True, eq=False)
class TrainingMatrix:
    """Column-major features, labels and per-column sort order, built once.

    Fitting many trees on subsets of one matrix (cross-validation, search)
    reuses the sort order instead of re-sorting per fit.
    """

    XT: np.ndarray
    y: np.ndarray
    order: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.XT.shape[1])

    @property
    def n_features(self) -> int:
        return int(self.XT.shape[0])


def prepare(X, y) -> TrainingMatrix:
    XT = _as_xt(X)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if y.ndim != 1 or y.shape[0] != XT.shape[1]:
        raise ValueError("X and y have different numbers of rows")
    if y.size and (y.min() < 0 or y.max() > 1):
        raise ValueError("labels must be binary 0/1")
    return TrainingMatrix(*_freeze(XT, y, _argsort_columns(XT)))


def fit(X, y=None, hyperparams: TreeHyperparams = TreeHyperparams(),
        sample_indices=None) -> DecisionTree:
    """Grow a tree on the rows ``sample_indices`` and prune it with ``ccp_alpha``.

    ``X`` is either a feature matrix (with labels ``y``) or a
    :class:`TrainingMatrix` from :func:`prepare`. Growth is depth-first, or
    best-first (largest weighted gain next) when ``max_leaf_nodes`` is set.
    """
    data = X if isinstance(X, TrainingMatrix) else prepare(X, y)
    if sample_indices is None:
        idx = np.arange(data.n_rows, dtype=np.int64)
    else:
        idx = np.ascontiguousarray(sample_indices, dtype=np.int64)
    if idx.shape[0] == 0:
        raise ValueError("cannot fit a tree on an empty training set")
    p = hyperparams.resolve(idx.shape[0], data.n_features)
    arrays = _grow(data.XT, data.y, idx, data.order, p.criterion, p.splitter, p.max_depth,
                   p.min_samples_split, p.min_samples_leaf, p.max_features,
                   p.max_leaf_nodes, p.min_impurity_decrease, p.seed)
    tree = DecisionTree(hyperparams, data.n_features, idx.shape[0], *_freeze(*arrays))
    return ccp_prune(tree, hyperparams.ccp_alpha)


def ccp_prune(tree: DecisionTree, ccp_alpha: float) -> DecisionTree:
    """Minimal cost-complexity pruning on training misclassification cost.

    Repeatedly collapses the internal node with the smallest effective alpha
    ``(R(t) - R(T_t)) / (leaves(T_t) - 1)`` while it is <= ``ccp_alpha``;
    ties go to the deepest node. ``ccp_alpha == 0`` leaves the tree untouched.
    """
    if ccp_alpha < 0:
        raise ValueError("ccp_alpha must be >= 0")
    if ccp_alpha == 0 or tree.n_nodes == 1:
        return tree
    feature = _prune(tree.feature, tree.left, tree.right, tree.n0, tree.n1,
                     tree.training_size, float(ccp_alpha))
    if np.array_equal(feature, tree.feature):
        return tree
    arrays = _compact(feature, tree.threshold, tree.left, tree.right, tree.n0, tree.n1,
                      tree.node_depth, tree.gain)
    return DecisionTree(tree.hyperparams, tree.n_features, tree.training_size, *_freeze(*arrays))

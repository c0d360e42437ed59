"""CART classification tree grown greedily on Gini impurity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._backend import kernels
from ..dataset import Dataset
from .params import TrainingError, TreeParams

LEAF = -1


@dataclass(frozen=True, eq=False)
class TreeModel:
    """Flat node arrays; node 0 is the root, ``feature == -1`` marks a leaf.

    Rows with ``x[feature] <= threshold`` go left. Every node stores its
    training row count and positive count, so scores are exact fractions.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    n_samples: np.ndarray
    n_positive: np.ndarray
    n_features: int
    params: TreeParams
    seed: int = 0

    kind = "tree"

    @property
    def d(self) -> int:
        return self.n_features

    @property
    def value(self) -> np.ndarray:
        return self.n_positive / self.n_samples

    @property
    def node_count(self) -> int:
        return self.feature.shape[0]

    def depth(self) -> int:
        depth = np.zeros(self.node_count, dtype=np.int64)
        for i in range(self.node_count):
            if self.feature[i] != LEAF:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def leaf_index(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.intp)
        rows = np.arange(X.shape[0])
        active = self.feature[node] != LEAF
        while active.any():
            r, nd = rows[active], node[active]
            go_left = X[r, self.feature[nd]] <= self.threshold[nd]
            node[r] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] != LEAF
        return node

    def score_batch(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.leaf_index(X)]

    def state(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "n_samples": self.n_samples.tolist(),
            "n_positive": self.n_positive.tolist(),
            "n_features": self.n_features,
        }

    @classmethod
    def from_state(cls, state: dict, params: TreeParams, seed: int) -> "TreeModel":
        arr = lambda key, dt: np.asarray(state[key], dtype=dt)  # noqa: E731
        return cls(arr("feature", np.intp), arr("threshold", np.float64), arr("left", np.intp),
                   arr("right", np.intp), arr("n_samples", np.int64), arr("n_positive", np.int64),
                   int(state["n_features"]), params, seed)


def gini(pos: float, n: float) -> float:
    if n == 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


def train_tree(train: Dataset, params: TreeParams = TreeParams(), seed: int = 0) -> TreeModel:
    """Grow depth-first; a node becomes a leaf when it is pure, at max depth,
    or has no split leaving ``min_samples_leaf`` rows on each side.

    The chosen split minimises weighted child Gini, which by concavity never
    exceeds the parent's. Equal-Gini splits are still taken so that
    XOR-like structure can be resolved one level down. ``seed`` is kept for
    provenance; the scan itself is exhaustive and deterministic.
    """
    params.validate()
    if train.n == 0:
        raise TrainingError("cannot grow a tree on an empty dataset")
    X = train.rows
    y = np.ascontiguousarray(train.labels, dtype=np.int8)
    feature, threshold, left, right, n_samples, n_positive = [], [], [], [], [], []

    def new_node(idx: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        n_samples.append(idx.size)
        n_positive.append(int(y[idx].sum()))
        return len(feature) - 1

    stack = [(new_node(np.arange(train.n)), np.arange(train.n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        n, pos = n_samples[node], n_positive[node]
        if pos == 0 or pos == n or (params.max_depth is not None and depth >= params.max_depth) or n < 2 * params.min_samples_leaf:
            continue
        Xn = np.ascontiguousarray(X[idx])
        order = np.ascontiguousarray(np.argsort(Xn, axis=0, kind="stable"), dtype=np.intp)
        f, thr, score = kernels.best_split(Xn, np.ascontiguousarray(y[idx]), order, params.min_samples_leaf)
        if f < 0 or score > pos * (n - pos) / n:
            continue
        goes_left = Xn[:, f] <= thr
        li, ri = idx[goes_left], idx[~goes_left]
        feature[node], threshold[node] = int(f), float(thr)
        left[node] = new_node(li)
        right[node] = new_node(ri)
        # push right first so the left subtree is numbered first
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return TreeModel(
        np.asarray(feature, dtype=np.intp),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.intp),
        np.asarray(right, dtype=np.intp),
        np.asarray(n_samples, dtype=np.int64),
        np.asarray(n_positive, dtype=np.int64),
        train.d,
        params,
        seed,
    )

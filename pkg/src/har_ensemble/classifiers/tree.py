"""CART classification trees and bagged random forests."""
from __future__ import annotations

import numpy as np

from .. import _backend
from .base import Classifier


class DecisionTree(Classifier):
    """Greedy Gini CART.

    Thresholds are midpoints between consecutive distinct values; rows with
    ``x[feature] <= threshold`` go left. ``max_features`` restricts each
    split to that many randomly drawn candidate features (forest use); with
    ``None`` every feature is tried in index order.
    """

    kind = "cart"
    param_names = ("max_depth", "min_leaf")

    def __init__(self, max_depth: int = 12, min_leaf: int = 2, max_features: int | None = None, rng=None):
        if max_depth < 1 or min_leaf < 1:
            raise ValueError("max_depth and min_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.rng = rng

    def fit(self, X, y, sample_index=None, classes=None):
        """Fit on ``X[sample_index]`` (a bootstrap may repeat rows).

        ``classes`` pins the output columns when the sample may miss some.
        """
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.classes_ = np.unique(y) if classes is None else np.asarray(classes)
        y_enc = np.searchsorted(self.classes_, y).astype(np.intp)
        self.n_features_ = X.shape[1]
        idx = np.arange(X.shape[0], dtype=np.intp) if sample_index is None else np.asarray(sample_index, dtype=np.intp)
        self._grow(X, y_enc, idx)
        return self

    def _candidate_features(self, d):
        if self.max_features is None or self.max_features >= d:
            return np.arange(d, dtype=np.intp)
        return np.sort(self.rng.choice(d, self.max_features, replace=False)).astype(np.intp)

    def _grow(self, X, y_enc, root_idx):
        k = len(self.classes_)
        d = X.shape[1]
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(idx):
            counts = np.bincount(y_enc[idx], minlength=k).astype(np.float64)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(counts / counts.sum())
            return len(feature) - 1

        stack = [(new_node(root_idx), root_idx, 0)]
        while stack:
            node, idx, depth = stack.pop()
            if depth >= self.max_depth or len(idx) < 2 * self.min_leaf or value[node].max() == 1.0:
                continue
            f, t, _ = _backend.best_split(X, y_enc, idx, self._candidate_features(d), k, self.min_leaf)
            if f < 0:
                continue
            go_left = X[idx, f] <= t
            li, ri = idx[go_left], idx[~go_left]
            feature[node], threshold[node] = f, t
            left[node] = new_node(li)
            right[node] = new_node(ri)
            # right pushed first so the left subtree is expanded (and numbered) first
            stack.append((right[node], ri, depth + 1))
            stack.append((left[node], li, depth + 1))

        self.feature_ = np.array(feature, dtype=np.intp)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left, dtype=np.intp)
        self.right_ = np.array(right, dtype=np.intp)
        self.value_ = np.array(value)

    @property
    def depth_(self) -> int:
        depth = np.zeros(len(self.feature_), dtype=int)
        for n in range(len(self.feature_)):
            if self.feature_[n] >= 0:
                depth[self.left_[n]] = depth[self.right_[n]] = depth[n] + 1
        return int(depth.max())

    def apply(self, X):
        """Leaf index reached by every row."""
        X = self._check_X(X)
        node = np.zeros(X.shape[0], dtype=np.intp)
        while True:
            f = self.feature_[node]
            inner = f >= 0
            if not inner.any():
                return node
            rows = np.flatnonzero(inner)
            goes_left = X[rows, f[rows]] <= self.threshold_[node[rows]]
            node[rows] = np.where(goes_left, self.left_[node[rows]], self.right_[node[rows]])

    def predict_proba(self, X):
        return self.value_[self.apply(X)]

    def get_state(self):
        return {"feature_": self.feature_, "threshold_": self.threshold_, "left_": self.left_,
                "right_": self.right_, "value_": self.value_}

    def set_state(self, state):
        for name in ("feature_", "left_", "right_"):
            setattr(self, name, np.asarray(state[name], dtype=np.intp))
        self.threshold_ = np.asarray(state["threshold_"], dtype=np.float64)
        self.value_ = np.asarray(state["value_"], dtype=np.float64).reshape(len(self.feature_), -1)


class RandomForest(Classifier):
    """Bagged CART ensemble averaging leaf distributions.

    Tree ``t`` draws its bootstrap and feature subsets from
    ``default_rng([seed, t])`` so trees are reproducible independently of
    training order.
    """

    kind = "rforest"
    param_names = ("n_trees", "max_depth", "min_leaf", "max_features", "bootstrap", "seed")

    def __init__(self, n_trees: int = 100, max_depth: int = 12, min_leaf: int = 1,
                 max_features: int | str | None = "sqrt", bootstrap: bool = True, seed: int = 0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _resolve_max_features(self, d):
        if self.max_features == "sqrt":
            return max(1, int(round(np.sqrt(d))))
        return self.max_features

    def _fit(self, X, y_enc):
        m, d = X.shape
        y = self.classes_[y_enc]
        mf = self._resolve_max_features(d)
        self.trees_ = []
        for t in range(self.n_trees):
            rng = np.random.default_rng([self.seed, t])
            sample = rng.integers(0, m, size=m) if self.bootstrap else None
            tree = DecisionTree(self.max_depth, self.min_leaf, max_features=mf, rng=rng)
            self.trees_.append(tree.fit(X, y, sample_index=sample, classes=self.classes_))

    def predict_proba(self, X):
        X = self._check_X(X)
        total = np.zeros((X.shape[0], len(self.classes_)))
        for tree in self.trees_:
            total += tree.predict_proba(X)
        return total / len(self.trees_)

    def get_state(self):
        return {"trees": [tree.get_state() for tree in self.trees_]}

    def set_state(self, state):
        self.trees_ = []
        for s in state["trees"]:
            tree = DecisionTree(self.max_depth, self.min_leaf)
            tree.classes_ = self.classes_
            tree.n_features_ = self.n_features_
            tree.set_state(s)
            self.trees_.append(tree)


def train_cart(X, y, max_depth=12, min_leaf=2) -> DecisionTree:
    return DecisionTree(max_depth, min_leaf).fit(X, y)


def train_random_forest(X, y, n_trees=100, max_depth=12, min_leaf=1, seed=0, **kwargs) -> RandomForest:
    return RandomForest(n_trees, max_depth, min_leaf, seed=seed, **kwargs).fit(X, y)

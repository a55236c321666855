from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .base import Classifier

WEIGHT_EPS = 1e-9


class KNearestNeighbors(Classifier):
    """Euclidean k-NN; weighted votes use 1/(d + 1e-9).

    Equal distances keep training-set order, so the earlier training row wins
    the last neighbour slot.
    """

    kind = "knn"
    param_names = ("k", "weighted")
    array_names = ("X_", "y_")

    def __init__(self, k: int = 5, weighted: bool = True):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.weighted = weighted

    def _fit(self, X, y_enc):
        if self.k > X.shape[0]:
            raise ValueError(f"k={self.k} exceeds the {X.shape[0]} training rows")
        self.X_ = X.copy()
        self.y_ = y_enc.astype(np.float64)

    def kneighbors(self, X):
        d = cdist(self._check_X(X), self.X_)
        idx = np.argsort(d, axis=1, kind="stable")[:, : self.k]
        return np.take_along_axis(d, idx, axis=1), idx

    def predict_proba(self, X):
        dist, idx = self.kneighbors(X)
        w = 1.0 / (dist + WEIGHT_EPS) if self.weighted else np.ones_like(dist)
        scores = np.zeros((dist.shape[0], len(self.classes_)))
        rows = np.repeat(np.arange(dist.shape[0]), self.k)
        np.add.at(scores, (rows, self.y_[idx].astype(np.intp).ravel()), w.ravel())
        return scores / scores.sum(axis=1, keepdims=True)


def knn_predict(X_train, y_train, x, k=5, weighted=True) -> np.ndarray:
    """Class distribution(s) for query ``x`` against a training set."""
    model = KNearestNeighbors(k, weighted).fit(X_train, y_train)
    return model.predict_proba(x)

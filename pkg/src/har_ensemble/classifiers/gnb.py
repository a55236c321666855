from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .base import Classifier


class GaussianNB(Classifier):
    """Gaussian naive Bayes with per-feature variances floored at ``var_floor``."""

    kind = "gnb"
    param_names = ("var_floor",)
    array_names = ("class_prior_", "theta_", "var_")

    def __init__(self, var_floor: float = 1e-6):
        if var_floor <= 0:
            raise ValueError("var_floor must be positive")
        self.var_floor = var_floor

    def _fit(self, X, y_enc):
        k = len(self.classes_)
        counts = np.bincount(y_enc, minlength=k).astype(np.float64)
        self.class_prior_ = counts / counts.sum()
        self.theta_ = np.stack([X[y_enc == c].mean(axis=0) for c in range(k)])
        var = np.stack([X[y_enc == c].var(axis=0) for c in range(k)])
        self.var_ = np.maximum(var, self.var_floor)

    def joint_log_likelihood(self, X):
        X = self._check_X(X)
        ll = -0.5 * np.sum(np.log(2 * np.pi * self.var_), axis=1)
        sq = ((X[:, None, :] - self.theta_[None]) ** 2 / self.var_[None]).sum(axis=2)
        return np.log(self.class_prior_) + ll - 0.5 * sq

    def predict_proba(self, X):
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))


def train_gaussian_nb(X, y, var_floor=1e-6) -> GaussianNB:
    return GaussianNB(var_floor).fit(X, y)

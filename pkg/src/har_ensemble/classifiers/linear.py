"""Softmax logistic regression and one-vs-rest linear SVM, full-batch gradient descent."""
from __future__ import annotations

import numpy as np

from .base import Classifier, TrainingError, log_softmax, one_hot, softmax


def logistic_loss_grad(W, b, X, Y, l2):
    """Mean cross-entropy + (l2/2)||W||^2 and its gradients w.r.t. W and b."""
    Z = X @ W + b
    m = X.shape[0]
    loss = -np.sum(Y * log_softmax(Z)) / m + 0.5 * l2 * np.sum(W * W)
    R = (softmax(Z) - Y) / m
    return loss, X.T @ R + l2 * W, R.sum(axis=0)


def hinge_loss_grad(W, b, X, Ypm, l2):
    """One-vs-rest hinge loss summed over classes, with a subgradient.

    ``Ypm`` holds +1 for the row's class and -1 elsewhere. At the kink
    (margin exactly 1) the zero subgradient is used.
    """
    m = X.shape[0]
    margins = Ypm * (X @ W + b)
    slack = np.maximum(0.0, 1.0 - margins)
    loss = slack.sum() / m + 0.5 * l2 * np.sum(W * W)
    A = -(Ypm * (margins < 1.0)) / m
    return loss, X.T @ A + l2 * W, A.sum(axis=0)


class _GradientLinear(Classifier):
    param_names = ("lr", "epochs", "l2")
    array_names = ("coef_", "intercept_")

    def __init__(self, lr: float, epochs: int, l2: float):
        if lr <= 0 or epochs < 1 or l2 < 0:
            raise ValueError(f"need lr > 0, epochs >= 1, l2 >= 0; got {lr}, {epochs}, {l2}")
        self.lr = lr
        self.epochs = epochs
        self.l2 = l2

    def _targets(self, y_enc, k):
        raise NotImplementedError

    def _loss_grad(self, W, b, X, T):
        raise NotImplementedError

    def _fit(self, X, y_enc):
        k = len(self.classes_)
        T = self._targets(y_enc, k)
        W = np.zeros((X.shape[1], k))
        b = np.zeros(k)
        history = []
        with np.errstate(over="ignore", invalid="ignore"):
            for epoch in range(self.epochs):
                loss, gW, gb = self._loss_grad(W, b, X, T)
                if not np.isfinite(loss):
                    raise TrainingError(f"{self.kind}: loss became non-finite at epoch {epoch}; "
                                        f"lr={self.lr} is likely too high")
                history.append(loss)
                W -= self.lr * gW
                b -= self.lr * gb
        history.append(self._loss_grad(W, b, X, T)[0])
        self.coef_, self.intercept_ = W, b
        self.loss_history_ = history

    def decision_function(self, X):
        return self._check_X(X) @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        return softmax(self.decision_function(X))


class LogisticRegression(_GradientLinear):
    kind = "logreg"

    def __init__(self, lr: float = 0.1, epochs: int = 500, l2: float = 1e-4):
        super().__init__(lr, epochs, l2)

    def _targets(self, y_enc, k):
        return one_hot(y_enc, k)

    def _loss_grad(self, W, b, X, T):
        return logistic_loss_grad(W, b, X, T, self.l2)


class LinearSVM(_GradientLinear):
    """One-vs-rest hinge-loss scorers.

    ``predict_proba`` is a softmax over the margins, a pseudo-probability
    that only exists so soft combination rules have something to combine.
    """

    kind = "linsvm"

    def __init__(self, lr: float = 0.01, epochs: int = 500, l2: float = 1e-3):
        super().__init__(lr, epochs, l2)

    def _targets(self, y_enc, k):
        return 2.0 * one_hot(y_enc, k) - 1.0

    def _loss_grad(self, W, b, X, T):
        return hinge_loss_grad(W, b, X, T, self.l2)


def train_logistic_regression(X, y, lr=0.1, epochs=500, l2=1e-4) -> LogisticRegression:
    return LogisticRegression(lr, epochs, l2).fit(X, y)


def train_linear_svm_ovr(X, y, lr=0.01, epochs=500, l2=1e-3) -> LinearSVM:
    return LinearSVM(lr, epochs, l2).fit(X, y)

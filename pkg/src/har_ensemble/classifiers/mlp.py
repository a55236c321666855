"""One-hidden-layer ReLU network trained with mini-batch SGD."""
from __future__ import annotations

import numpy as np

from .base import Classifier, TrainingError, log_softmax, one_hot, softmax


def glorot_uniform(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def mlp_forward(params, X):
    W1, b1, W2, b2 = params
    pre = X @ W1 + b1
    hidden = np.maximum(pre, 0.0)
    return pre, hidden, hidden @ W2 + b2


def mlp_loss_grad(params, X, Y):
    """Mean cross-entropy and backpropagated gradients for (W1, b1, W2, b2)."""
    W1, b1, W2, b2 = params
    m = X.shape[0]
    pre, hidden, logits = mlp_forward(params, X)
    loss = -np.sum(Y * log_softmax(logits)) / m
    d_logits = (softmax(logits) - Y) / m
    gW2 = hidden.T @ d_logits
    gb2 = d_logits.sum(axis=0)
    d_hidden = (d_logits @ W2.T) * (pre > 0)
    gW1 = X.T @ d_hidden
    gb1 = d_hidden.sum(axis=0)
    return loss, (gW1, gb1, gW2, gb2)


class MLP(Classifier):
    kind = "mlp"
    param_names = ("hidden", "lr", "epochs", "batch", "seed")
    array_names = ("W1_", "b1_", "W2_", "b2_")

    def __init__(self, hidden: int = 64, lr: float = 0.01, epochs: int = 200, batch: int = 32, seed: int = 0):
        if hidden < 1 or lr <= 0 or epochs < 1 or batch < 1:
            raise ValueError("hidden, epochs and batch must be >= 1 and lr > 0")
        self.hidden = hidden
        self.lr = lr
        self.epochs = epochs
        self.batch = batch
        self.seed = seed

    def init_params(self, n_features, n_classes, rng):
        return [
            glorot_uniform(rng, n_features, self.hidden),
            np.zeros(self.hidden),
            glorot_uniform(rng, self.hidden, n_classes),
            np.zeros(n_classes),
        ]

    def _fit(self, X, y_enc):
        rng = np.random.default_rng(self.seed)
        Y = one_hot(y_enc, len(self.classes_))
        params = self.init_params(X.shape[1], Y.shape[1], rng)
        m = X.shape[0]
        history = [mlp_loss_grad(params, X, Y)[0]]
        for epoch in range(self.epochs):
            order = rng.permutation(m)
            for start in range(0, m, self.batch):
                rows = order[start:start + self.batch]
                loss, grads = mlp_loss_grad(params, X[rows], Y[rows])
                if not np.isfinite(loss):
                    raise TrainingError(f"mlp: loss became non-finite at epoch {epoch}; lr={self.lr} is likely too high")
                for p, g in zip(params, grads):
                    p -= self.lr * g
            history.append(mlp_loss_grad(params, X, Y)[0])
        self.W1_, self.b1_, self.W2_, self.b2_ = params
        self.loss_history_ = history

    def predict_proba(self, X):
        params = (self.W1_, self.b1_, self.W2_, self.b2_)
        return softmax(mlp_forward(params, self._check_X(X))[2])


def train_mlp(X, y, hidden=64, lr=0.01, epochs=200, batch=32, seed=0) -> MLP:
    return MLP(hidden, lr, epochs, batch, seed).fit(X, y)

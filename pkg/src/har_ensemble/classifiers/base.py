"""Shared classifier plumbing: label encoding, argmax prediction, state I/O."""
from __future__ import annotations

import numpy as np


class TrainingError(RuntimeError):
    """A learner failed to train (typically a diverging loss)."""


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def one_hot(y_enc: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((len(y_enc), n_classes))
    out[np.arange(len(y_enc)), y_enc] = 1.0
    return out


def check_training_set(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise ValueError(f"features must be a 2-D matrix, got shape {X.shape}")
    if len(y) != X.shape[0]:
        raise ValueError(f"{X.shape[0]} rows but {len(y)} labels")
    classes, y_enc = np.unique(y, return_inverse=True)
    if X.shape[0] < len(classes):
        raise ValueError("fewer training rows than classes")
    return X, classes, y_enc.astype(np.intp)


class Classifier:
    """Base for every learner.

    Subclasses implement ``_fit(X, y_enc)`` and ``predict_proba``; the
    columns of ``predict_proba`` follow ``classes_`` (ascending codes), so
    ``predict`` ties break toward the lowest class code.
    """

    kind = "base"
    param_names: tuple[str, ...] = ()
    array_names: tuple[str, ...] = ()

    classes_: np.ndarray

    def get_params(self) -> dict:
        return {name: getattr(self, name) for name in self.param_names}

    def fit(self, X, y):
        X, self.classes_, y_enc = check_training_set(X, y)
        self.n_features_ = X.shape[1]
        self._fit(X, y_enc)
        return self

    def _fit(self, X, y_enc):
        raise NotImplementedError

    def predict_proba(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]

    def _check_X(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features_:
            raise ValueError(f"model expects {self.n_features_} features, got {X.shape[1]}")
        return X

    # persistence hooks; trees override these
    def get_state(self) -> dict:
        return {name: getattr(self, name) for name in self.array_names}

    def set_state(self, state: dict) -> None:
        for name in self.array_names:
            setattr(self, name, np.asarray(state[name], dtype=np.float64))

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

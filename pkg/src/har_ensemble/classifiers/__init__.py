"""Base learners sharing one fit / predict / predict_proba contract."""
from __future__ import annotations

from dataclasses import dataclass, field

from .base import Classifier, TrainingError
from .gnb import GaussianNB, train_gaussian_nb
from .knn import KNearestNeighbors, knn_predict
from .linear import (LinearSVM, LogisticRegression, hinge_loss_grad, logistic_loss_grad,
                     train_linear_svm_ovr, train_logistic_regression)
from .mlp import MLP, mlp_loss_grad, train_mlp
from .persistence import load_model, model_from_dict, model_to_dict, save_model
from .tree import DecisionTree, RandomForest, train_cart, train_random_forest

CLASSIFIERS = {
    cls.kind: cls
    for cls in (LogisticRegression, GaussianNB, KNearestNeighbors, LinearSVM, MLP, DecisionTree, RandomForest)
}

SEEDED = {"mlp", "rforest"}


@dataclass
class ClassifierSpec:
    """A learner kind plus hyperparameter overrides.

    ``seed`` only matters for the stochastic learners (mlp, rforest).
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in CLASSIFIERS:
            raise ValueError(f"unknown classifier kind {self.kind!r}; choose from {sorted(CLASSIFIERS)}")

    def build(self, seed: int = 0) -> Classifier:
        params = dict(self.params)
        if self.kind in SEEDED:
            params.setdefault("seed", seed if self.seed is None else self.seed)
        return CLASSIFIERS[self.kind](**params)

    @classmethod
    def from_dict(cls, d) -> "ClassifierSpec":
        if isinstance(d, str):
            return cls(d)
        return cls(d["kind"], dict(d.get("params", {})), d.get("seed"))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}


__all__ = [
    "CLASSIFIERS", "Classifier", "ClassifierSpec", "TrainingError",
    "LogisticRegression", "LinearSVM", "GaussianNB", "KNearestNeighbors", "MLP", "DecisionTree", "RandomForest",
    "train_logistic_regression", "train_linear_svm_ovr", "train_gaussian_nb", "knn_predict", "train_mlp",
    "train_cart", "train_random_forest", "logistic_loss_grad", "hinge_loss_grad", "mlp_loss_grad",
    "save_model", "load_model", "model_to_dict", "model_from_dict",
]

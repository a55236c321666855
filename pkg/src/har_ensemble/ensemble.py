"""Voting ensembles over the base learners.

Hard rules vote with member labels (plurality, majority, unanimous); soft
rules combine member class distributions elementwise (sum, product, min,
max, median).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .classifiers import Classifier, ClassifierSpec, model_from_dict, model_to_dict

HARD_RULES = ("plurality", "majority", "unanimous")
SOFT_RULES = ("sum", "product", "min", "max", "median")
TIEBREAKS = ("sum", "lowest")


class _Abstain:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABSTAIN"

    def __reduce__(self):
        return (_Abstain, ())


ABSTAIN = _Abstain()

PRESETS = {
    "proposed": ("logreg", "mlp", "knn", "linsvm", "rforest"),
    "catal": ("cart", "logreg", "mlp"),
}


def hard_vote(labels: Sequence, rule: str = "plurality", tiebreak: str = "lowest",
              scores: dict | None = None):
    """Combine member labels.

    Returns a label or ``ABSTAIN``. Majority and unanimous abstain when their
    threshold is not met; a plurality tie is settled by ``tiebreak``:
    ``"lowest"`` picks the smallest tied label, ``"sum"`` picks the tied
    label with the highest ``scores[label]`` and then the smallest.
    """
    if len(labels) == 0:
        raise ValueError("hard_vote needs at least one label")
    if rule not in HARD_RULES:
        raise ValueError(f"unknown hard rule {rule!r}")
    counts = Counter(labels)
    top = max(counts.values())
    if rule == "unanimous":
        return labels[0] if len(counts) == 1 else ABSTAIN
    if rule == "majority":
        if 2 * top > len(labels):
            return next(lab for lab, c in counts.items() if c == top)
        return ABSTAIN
    tied = sorted(lab for lab, c in counts.items() if c == top)
    if len(tied) == 1 or tiebreak == "lowest" or scores is None:
        return tied[0]
    best = max(scores[lab] for lab in tied)
    return next(lab for lab in tied if scores[lab] == best)


def combine_scores(distributions, rule: str) -> np.ndarray:
    """Elementwise combination across members (axis 0), unnormalised."""
    P = np.asarray(distributions, dtype=np.float64)
    if P.ndim < 2:
        raise ValueError("need a stack of member distributions")
    if rule == "sum":
        return P.sum(axis=0)
    if rule == "product":
        return P.prod(axis=0)
    if rule == "min":
        return P.min(axis=0)
    if rule == "max":
        return P.max(axis=0)
    if rule == "median":
        return np.median(P, axis=0)
    raise ValueError(f"unknown soft rule {rule!r}")


def soft_vote(distributions: Sequence[Sequence[float]], rule: str = "sum") -> tuple[int, np.ndarray]:
    """Return ``(class index, combined scores)``; ties go to the lowest index."""
    arities = {len(p) for p in distributions}
    if len(arities) != 1:
        raise ValueError(f"member distributions disagree on class count: {sorted(arities)}")
    scores = combine_scores(distributions, rule)
    return int(np.argmax(scores)), scores


@dataclass
class EnsembleSpec:
    members: list[ClassifierSpec]
    combine_rule: str = "plurality"
    tiebreak: str = "sum"
    allow_single: bool = False  # test hook: one-member ensembles

    def __post_init__(self):
        self.members = [m if isinstance(m, ClassifierSpec) else ClassifierSpec.from_dict(m) for m in self.members]
        if len(self.members) < (1 if self.allow_single else 2):
            raise ValueError("an ensemble needs at least 2 members")
        if self.combine_rule not in HARD_RULES + SOFT_RULES:
            raise ValueError(f"unknown combine rule {self.combine_rule!r}")
        if self.tiebreak not in TIEBREAKS:
            raise ValueError(f"unknown tiebreak {self.tiebreak!r}")

    @classmethod
    def preset(cls, name: str, combine_rule: str = "plurality", params: dict | None = None, **kw) -> "EnsembleSpec":
        """Named member set; ``params`` maps a kind to hyperparameter overrides."""
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        params = params or {}
        members = [ClassifierSpec(kind, dict(params.get(kind, {}))) for kind in PRESETS[name]]
        return cls(members, combine_rule, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleSpec":
        if "preset" in d:
            return cls.preset(d["preset"], d.get("combine_rule", "plurality"), d.get("params"),
                              tiebreak=d.get("tiebreak", "sum"))
        return cls([ClassifierSpec.from_dict(m) for m in d["members"]],
                   d.get("combine_rule", "plurality"), d.get("tiebreak", "sum"), d.get("allow_single", False))

    def to_dict(self) -> dict:
        return {"members": [m.to_dict() for m in self.members], "combine_rule": self.combine_rule,
                "tiebreak": self.tiebreak}

    @property
    def member_names(self) -> list[str]:
        """Kinds, suffixed with their position when a kind repeats."""
        kinds = [m.kind for m in self.members]
        return [k if kinds.count(k) == 1 else f"{k}#{i}" for i, k in enumerate(kinds)]


class MemberTrainingError(RuntimeError):
    pass


@dataclass
class EnsembleModel:
    spec: EnsembleSpec
    members: list[Classifier]
    classes_: np.ndarray = field(default=None)

    def member_probas(self, X) -> np.ndarray:
        """(members, rows, classes) stack aligned on ``classes_``."""
        out = np.zeros((len(self.members), np.atleast_2d(X).shape[0], len(self.classes_)))
        for i, m in enumerate(self.members):
            cols = np.searchsorted(self.classes_, m.classes_)
            out[i][:, cols] = m.predict_proba(X)
        return out

    def combine(self, P: np.ndarray, strict: bool = False) -> np.ndarray:
        """Labels from a member probability stack; see :meth:`predict`."""
        rule = self.spec.combine_rule
        if rule in SOFT_RULES:
            return self.classes_[np.argmax(combine_scores(P, rule), axis=1)]
        votes = np.argmax(P, axis=2)  # member argmax, ties -> lowest code
        sums = P.sum(axis=0)
        out = []
        for r in range(P.shape[1]):
            col = votes[:, r].tolist()
            scores = dict(enumerate(sums[r]))
            winner = hard_vote(col, rule, self.spec.tiebreak, scores)
            if winner is ABSTAIN and not strict:
                winner = (int(np.argmax(sums[r])) if self.spec.tiebreak == "sum"
                          else min(Counter(col).most_common(), key=lambda kv: (-kv[1], kv[0]))[0])
            out.append(winner)
        if strict:
            return np.array([w if w is ABSTAIN else self.classes_[w] for w in out], dtype=object)
        return self.classes_[np.array(out, dtype=np.intp)]

    def predict(self, X, strict: bool = False) -> np.ndarray:
        """Ensemble labels.

        In the default mode an abstention (majority/unanimous) falls through
        to the tiebreak policy: sum-rule argmax over member distributions, or
        the lowest code among the most-voted labels. ``strict=True`` returns
        an object array with ``ABSTAIN`` entries instead.
        """
        return self.combine(self.member_probas(X), strict)

    def predict_proba(self, X) -> np.ndarray:
        """Normalised sum-rule distribution (for inspection only)."""
        s = self.member_probas(X).sum(axis=0)
        return s / s.sum(axis=1, keepdims=True)

    def to_dict(self) -> dict:
        return {"format": "har-ensemble", "version": 1, "spec": self.spec.to_dict(),
                "classes": [int(c) for c in self.classes_],
                "members": [model_to_dict(m) for m in self.members]}

    @classmethod
    def from_dict(cls, doc: dict) -> "EnsembleModel":
        spec = EnsembleSpec.from_dict(doc["spec"])
        return cls(spec, [model_from_dict(m) for m in doc["members"]], np.array(doc["classes"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> "EnsembleModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit_ensemble(spec: EnsembleSpec, X, y, seed: int = 0) -> EnsembleModel:
    """Fit every member independently on the same data."""
    members = []
    for name, member_spec in zip(spec.member_names, spec.members):
        try:
            members.append(member_spec.build(seed).fit(X, y))
        except Exception as exc:
            raise MemberTrainingError(f"ensemble member {name!r} failed to train: {exc}") from exc
    return EnsembleModel(spec, members, np.unique(np.asarray(y)))


def predict_ensemble(model: EnsembleModel, X, strict: bool = False) -> np.ndarray:
    return model.predict(X, strict)

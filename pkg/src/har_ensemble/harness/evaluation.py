"""Leave-one-trial-out cross-validation of an ensemble pipeline."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..dataio import LabeledRecording, segment_trials, select_channels
from ..ensemble import ABSTAIN, EnsembleSpec, fit_ensemble
from ..features import FeatureConfig, extract_feature_matrix, fit_standardizer, next_pow2
from ..windowing import loto_folds, make_windows, window_length
from .metrics import confidence_interval, score_all

logger = logging.getLogger(__name__)

METRICS = ("accuracy", "recall", "precision", "fscore")


class LeakageError(AssertionError):
    """A trial landed on both sides of a fold split."""


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    window_seconds: float = 5.0
    overlap: float = 0.5
    windowing: str = "snow"
    k: int = 10
    seed: int = 0
    features: FeatureConfig = field(default_factory=FeatureConfig)
    ensemble: EnsembleSpec = field(default_factory=lambda: EnsembleSpec.preset("proposed"))
    method: str = "proposed"
    channel_groups: list[str] | None = None
    drop_labels: list[int] = field(default_factory=lambda: [0])
    min_trial_len: int | None = None  # samples; None -> one window
    ci_level: float = 0.90
    strict: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        if "features" in d:
            d["features"] = FeatureConfig.from_dict(d["features"])
        if "ensemble" in d:
            d.setdefault("method", d["ensemble"].get("preset", "custom"))
            d["ensemble"] = EnsembleSpec.from_dict(d["ensemble"])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def with_preset(self, preset: str) -> "PipelineConfig":
        """Same pipeline, members swapped for a named preset (hyperparameters by kind are kept)."""
        params = {m.kind: m.params for m in self.ensemble.members if m.params}
        spec = EnsembleSpec.preset(preset, self.ensemble.combine_rule, params, tiebreak=self.ensemble.tiebreak)
        return PipelineConfig(**{**self.__dict__, "ensemble": spec, "method": preset})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["features"] = self.features.to_dict()
        d["ensemble"] = self.ensemble.to_dict()
        return d


@dataclass
class EvaluationReport:
    folds: dict[str, list[float]]
    summary: dict[str, dict]
    members: dict[str, dict[str, list[float]]]
    fold_sizes: list[int]
    metadata: dict

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        return cls(d["folds"], d["summary"], d["members"], d["fold_sizes"], d["metadata"])

    @classmethod
    def load(cls, path: str | Path) -> "EvaluationReport":
        d = json.loads(Path(path).read_text())
        return cls.from_dict(d.get("report", d))

    def member_means(self, metric: str = "accuracy") -> dict[str, float]:
        return {name: float(np.mean(m[metric])) for name, m in self.members.items()}


def summarize(fold_values: dict[str, list[float]], level: float) -> dict[str, dict]:
    out = {}
    for metric, vals in fold_values.items():
        lo, hi = confidence_interval(vals, level)
        out[metric] = {"mean": float(np.mean(vals)), "ci": [lo, hi]}
    return out


def prepare_windows(recordings: Sequence[LabeledRecording], config: PipelineConfig):
    """Trials, per-window arrays and channel layout for a dataset."""
    if not recordings:
        raise PipelineError("no recordings supplied")
    if config.channel_groups:
        recordings = [select_channels(r, config.channel_groups) for r in recordings]
    layout = recordings[0].channel_names
    for r in recordings[1:]:
        if r.channel_names != layout:
            raise PipelineError(f"recording {r.subject_id} has channels {r.channel_names}, expected {layout}")
    rates = {r.sampling_rate_hz for r in recordings}
    if len(rates) != 1:
        raise PipelineError(f"recordings mix sampling rates {sorted(rates)}")
    rate = rates.pop()
    w = window_length(config.window_seconds, rate)
    min_len = config.min_trial_len or w
    trials = [t for r in recordings for t in segment_trials(r, min_len, config.drop_labels)]
    windows = make_windows(trials, config.window_seconds, config.windowing, config.overlap)
    if not windows:
        raise PipelineError("no windows produced; recordings shorter than one window?")
    samples = np.stack([win.samples for win in windows])
    labels = np.array([win.label for win in windows])
    trial_ids = np.array([win.trial_id for win in windows])
    return trials, samples, labels, trial_ids, recordings[0].channels, rate, w


def cross_validate(recordings: Sequence[LabeledRecording], config: PipelineConfig,
                   dataset_id: str = "dataset") -> EvaluationReport:
    """LOTO k-fold evaluation; folds run in index order and the result is seed-deterministic."""
    trials, samples, labels, trial_ids, channels, rate, w = prepare_windows(recordings, config)
    if len(trials) < config.k:
        raise PipelineError(f"{len(trials)} trials cannot fill k={config.k} folds")
    assignment = loto_folds(trials, config.k, config.seed)
    fold_of = np.array([assignment.folds[t] for t in trial_ids])
    X, names = extract_feature_matrix(samples, channels, rate, config.features)
    logger.info("%s: %d trials, %d windows, %d features", dataset_id, len(trials), len(X), X.shape[1])

    member_names = config.ensemble.member_names
    folds = {m: [] for m in METRICS}
    members = {name: {m: [] for m in METRICS} for name in member_names}
    sizes, abstentions = [], []
    for fold in range(config.k):
        stage = "split"
        try:
            test = fold_of == fold
            train = ~test
            train_trials, test_trials = set(trial_ids[train]), set(trial_ids[test])
            if train_trials & test_trials:
                raise LeakageError(f"fold {fold}: trials {sorted(train_trials & test_trials)} on both sides")
            if len(train_trials | test_trials) != len(trials):
                raise LeakageError(f"fold {fold}: train and test do not cover all trials")
            stage = "standardize"
            scaler = fit_standardizer(X[train])
            Xtr, Xte = scaler.apply(X[train]), scaler.apply(X[test])
            stage = "fit"
            model = fit_ensemble(config.ensemble, Xtr, labels[train], seed=config.seed)
            stage = "predict"
            P = model.member_probas(Xte)
            pred = model.combine(P, strict=config.strict)
        except (LeakageError, KeyboardInterrupt):
            raise
        except Exception as exc:
            raise PipelineError(f"fold {fold}, stage {stage}: {exc}") from exc
        y_true = labels[test]
        classes = np.unique(np.concatenate([y_true, model.classes_]))
        if config.strict:
            n_abstain = sum(p is ABSTAIN for p in pred)
            pred = np.array([-(2**62) if p is ABSTAIN else p for p in pred], dtype=np.int64)
            abstentions.append(int(n_abstain))
        for metric, value in score_all(y_true, pred, classes).items():
            folds[metric].append(value)
        for name, Pm in zip(member_names, P):
            member_pred = model.classes_[np.argmax(Pm, axis=1)]
            for metric, value in score_all(y_true, member_pred, classes).items():
                members[name][metric].append(value)
        sizes.append(int(test.sum()))
        logger.info("fold %d: accuracy %.4f on %d windows", fold, folds["accuracy"][-1], sizes[-1])

    metadata = {
        "dataset": dataset_id,
        "method": config.method,
        "config": config.to_dict(),
        "n_trials": len(trials),
        "n_windows": int(len(X)),
        "window_samples": w,
        "fft_size": next_pow2(w),
        "sampling_rate_hz": rate,
        "feature_names": names,
        "averaging": "accuracy = overall match rate; recall/precision/F-score = unweighted macro mean over classes",
        "ci": f"Student-t over {config.k} fold values at level {config.ci_level}",
    }
    if config.strict:
        metadata["abstentions"] = abstentions
    return EvaluationReport(folds, summarize(folds, config.ci_level), members, sizes, metadata)

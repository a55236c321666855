"""Fixed-duration windows over trials, and trial-level fold assignment."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataio import SensorTrial


@dataclass
class Window:
    trial_id: str
    subject_id: str
    label: int
    samples: np.ndarray
    start_index: int
    sampling_rate_hz: float


@dataclass
class FoldAssignment:
    fold_count: int
    folds: dict[str, int]  # trial_id -> fold index

    def test_trials(self, fold: int) -> set[str]:
        return {t for t, f in self.folds.items() if f == fold}

    def train_trials(self, fold: int) -> set[str]:
        return {t for t, f in self.folds.items() if f != fold}


def window_length(window_seconds: float, sampling_rate_hz: float) -> int:
    w = int(round(window_seconds * sampling_rate_hz))
    if w < 1:
        raise ValueError(f"{window_seconds}s at {sampling_rate_hz} Hz gives an empty window")
    return w


def _slide(trial: SensorTrial, w: int, stride: int) -> list[Window]:
    n = len(trial)
    return [
        Window(trial.trial_id, trial.subject_id, trial.label,
               trial.samples[start:start + w], start, trial.sampling_rate_hz)
        for start in range(0, n - w + 1, stride)
    ]


def snow_windows(trial: SensorTrial, window_seconds: float, overlap_fraction: float = 0.5) -> list[Window]:
    """Overlapping windows; a trailing partial window is dropped."""
    if not 0 <= overlap_fraction < 1:
        raise ValueError(f"overlap_fraction must be in [0, 1), got {overlap_fraction}")
    w = window_length(window_seconds, trial.sampling_rate_hz)
    stride = max(1, int(round(w * (1 - overlap_fraction))))
    return _slide(trial, w, stride)


def fnow_windows(trial: SensorTrial, window_seconds: float) -> list[Window]:
    w = window_length(window_seconds, trial.sampling_rate_hz)
    return _slide(trial, w, w)


def make_windows(trials: Sequence[SensorTrial], window_seconds: float,
                 scheme: str = "snow", overlap_fraction: float = 0.5) -> list[Window]:
    """Window every trial with one scheme; all trials must share a sampling rate."""
    rates = {t.sampling_rate_hz for t in trials}
    if len(rates) > 1:
        raise ValueError(f"trials mix sampling rates {sorted(rates)}; resample first")
    out: list[Window] = []
    for t in trials:
        if scheme == "snow":
            out.extend(snow_windows(t, window_seconds, overlap_fraction))
        elif scheme == "fnow":
            out.extend(fnow_windows(t, window_seconds))
        else:
            raise ValueError(f"unknown windowing scheme {scheme!r}")
    return out


def loto_folds(trials: Sequence[SensorTrial], k: int = 10, seed: int = 0) -> FoldAssignment:
    """Deal whole trials to ``k`` folds, stratified by label.

    Trials are shuffled with a seeded generator, grouped by label (labels in
    ascending order), and dealt round-robin with one running counter across
    groups so fold sizes stay within one of each other.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if len(trials) < k:
        raise ValueError(f"{len(trials)} trials cannot fill {k} folds")
    ids = [t.trial_id for t in trials]
    if len(set(ids)) != len(ids):
        raise ValueError("trial ids must be unique")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(trials))
    by_label: dict[int, list[str]] = defaultdict(list)
    for i in order:
        by_label[trials[i].label].append(trials[i].trial_id)
    folds = {}
    slot = 0
    for label in sorted(by_label):
        for trial_id in by_label[label]:
            folds[trial_id] = slot % k
            slot += 1
    return FoldAssignment(k, folds)

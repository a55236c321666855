"""Seeded synthetic 3-class benchmark for dataset-free runs."""
from __future__ import annotations

import numpy as np

from ..dataio import SYNTH_LABELS, ChannelSpec, LabeledRecording

# label -> (frequency Hz, amplitude)
CLASS_SIGNATURES = {1: (1.0, 1.0), 2: (2.0, 1.5), 3: (3.5, 2.0)}


def make_synthetic_recording(seed: int = 0, trials_per_class: int = 20, trial_seconds: float = 10.0,
                             rate_hz: float = 50.0, noise_sigma: float = 1.5,
                             subject_id: str = "synth") -> LabeledRecording:
    """One recording of back-to-back trials cycling labels 1, 2, 3, 1, 2, 3, ...

    Each trial is a sinusoid on an ``acc`` X/Y/Z triad with the class's
    frequency and amplitude, a random phase and per-axis gain, and Gaussian
    noise. Consecutive trials always differ in label, so trial segmentation
    recovers exactly ``3 * trials_per_class`` trials.
    """
    rng = np.random.default_rng(seed)
    n = int(round(trial_seconds * rate_hz))
    t = np.arange(n) / rate_hz
    chunks, labels = [], []
    for _ in range(trials_per_class):
        for label, (freq, amp) in CLASS_SIGNATURES.items():
            phase = rng.uniform(0, 2 * np.pi, size=3)
            gain = rng.uniform(0.8, 1.2, size=3)
            offset = rng.normal(0, 0.2, size=3)
            sig = amp * gain * np.sin(2 * np.pi * freq * t[:, None] + phase) + offset
            chunks.append(sig + rng.normal(0, noise_sigma, size=(n, 3)))
            labels.append(np.full(n, label))
    channels = [ChannelSpec(f"acc_{a}", "acc", a.upper()) for a in "xyz"]
    return LabeledRecording(subject_id, rate_hz, channels, np.concatenate(chunks), np.concatenate(labels),
                            dict(SYNTH_LABELS))

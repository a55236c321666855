"""Wearable-sensor activity recognition with voting ensembles.

Pipeline: recordings -> trials -> windows -> features -> base learners ->
voting ensemble -> leave-one-trial-out metrics with confidence intervals.
"""
from ._backend import BACKEND
from .dataio import (ChannelSpec, LabeledRecording, SensorTrial, load_canonical_csv, load_mhealth_dir,
                     load_recordings, parse_mhealth_log,
                     segment_trials, select_channels, write_canonical_csv)
from .ensemble import ABSTAIN, EnsembleSpec, fit_ensemble, hard_vote, predict_ensemble, soft_vote
from .features import FeatureConfig, extract_feature_matrix, extract_feature_vector
from .harness import EvaluationReport, PipelineConfig, compare, cross_validate, make_synthetic_recording
from .harness.report import render_report
from .windowing import fnow_windows, loto_folds, snow_windows

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ChannelSpec", "LabeledRecording", "SensorTrial", "load_canonical_csv", "load_mhealth_dir",
    "load_recordings", "parse_mhealth_log",
    "segment_trials", "select_channels", "write_canonical_csv", "ABSTAIN", "EnsembleSpec", "fit_ensemble",
    "hard_vote", "predict_ensemble", "soft_vote", "FeatureConfig", "extract_feature_matrix",
    "extract_feature_vector", "EvaluationReport", "PipelineConfig", "compare", "cross_validate",
    "make_synthetic_recording", "render_report", "fnow_windows", "loto_folds", "snow_windows",
]

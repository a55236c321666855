"""Cross-validation harness, metrics and reporting."""
from .evaluation import (METRICS, EvaluationReport, LeakageError, PipelineConfig, PipelineError,
                         cross_validate, prepare_windows)
from .metrics import (ConfusionCounts, accuracy, confidence_interval, confusion_counts, macro_fscore,
                      macro_precision, macro_recall, score_all)
from .report import compare, render_report, render_table
from .synth import make_synthetic_recording

__all__ = [
    "METRICS", "EvaluationReport", "LeakageError", "PipelineConfig", "PipelineError", "cross_validate",
    "prepare_windows", "ConfusionCounts", "accuracy", "confidence_interval", "confusion_counts",
    "macro_fscore", "macro_precision", "macro_recall", "score_all", "compare", "render_report",
    "render_table", "make_synthetic_recording",
]

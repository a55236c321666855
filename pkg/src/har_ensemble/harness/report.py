"""Side-by-side comparison of evaluation reports, rendered like a results table."""
from __future__ import annotations

from typing import Sequence

from .evaluation import EvaluationReport

TABLE_METRICS = (("accuracy", "Accuracy"), ("recall", "Recall"), ("fscore", "F-score"))
CELL = 18


def _cell(text: str) -> str:
    return f" {text:<{CELL - 1}}"


def render_table(datasets: Sequence[str], methods: Sequence[str],
                 reports: Sequence[Sequence[EvaluationReport]]) -> str:
    """Fixed-width table: metric column groups x methods, one block per dataset.

    ``reports[i][j]`` is method ``j`` on dataset ``i``.
    """
    group_width = CELL * len(methods)
    lines = ["|".join([""] + [f"{title:^{group_width}}" for _, title in TABLE_METRICS] + [""])]
    lines.append("|".join([""] + ["".join(_cell(m) for m in methods)] * len(TABLE_METRICS) + [""]))
    rule = "+" + "+".join("-" * group_width for _ in TABLE_METRICS) + "+"
    lines.insert(0, rule)
    lines.append(rule)
    for dataset, row in zip(datasets, reports):
        lines.append(f"|{dataset:^{group_width * len(TABLE_METRICS) + len(TABLE_METRICS) - 1}}|")
        means, cis = [], []
        for metric, _ in TABLE_METRICS:
            means.append("".join(_cell(f"{r.summary[metric]['mean']:.4f}") for r in row))
            cis.append("".join(_cell("({:.4f}, {:.4f})".format(*r.summary[metric]["ci"])) for r in row))
        lines.append("|".join([""] + means + [""]))
        lines.append("|".join([""] + cis + [""]))
        lines.append(rule)
    return "\n".join(lines)


def render_report(report: EvaluationReport) -> str:
    return render_table([report.metadata.get("dataset", "dataset")],
                        [report.metadata.get("method", "method")], [[report]])


def compare(reports_a: EvaluationReport | Sequence[EvaluationReport],
            reports_b: EvaluationReport | Sequence[EvaluationReport]) -> dict:
    """Per dataset and metric: both means and CIs plus the mean difference a - b."""
    if isinstance(reports_a, EvaluationReport):
        reports_a, reports_b = [reports_a], [reports_b]
    if len(reports_a) != len(reports_b):
        raise ValueError("need one report per method for every dataset")
    method_a = reports_a[0].metadata.get("method", "A")
    method_b = reports_b[0].metadata.get("method", "B")
    if method_a == method_b:
        method_a, method_b = f"{method_a} (A)", f"{method_b} (B)"
    datasets, rows = [], {}
    for ra, rb in zip(reports_a, reports_b):
        dataset = ra.metadata.get("dataset", "dataset")
        datasets.append(dataset)
        rows[dataset] = {
            metric: {
                "a": ra.summary[metric],
                "b": rb.summary[metric],
                "delta": ra.summary[metric]["mean"] - rb.summary[metric]["mean"],
            }
            for metric in ra.summary
        }
    table = render_table(datasets, [method_a, method_b], list(zip(reports_a, reports_b)))
    return {"methods": [method_a, method_b], "datasets": datasets, "rows": rows, "table": table}

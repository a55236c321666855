"""``har`` command line: convert, features, eval, compare, synth."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .dataio import load_mhealth_dir, load_recordings, parse_mhealth_log, write_canonical_csv
from .features import extract_feature_matrix
from .harness import EvaluationReport, PipelineConfig, compare, cross_validate, make_synthetic_recording
from .harness.evaluation import prepare_windows
from .harness.report import render_report

log = logging.getLogger("har")


def _load_config(path):
    return PipelineConfig.load(path) if path else PipelineConfig()


def cmd_convert(args):
    src, out = Path(args.inp), Path(args.out)
    if src.is_dir():
        recordings = load_mhealth_dir(src, args.rate)
    else:
        with open(src) as fh:
            recordings = [parse_mhealth_log(fh, src.stem, args.rate)]
    if len(recordings) == 1 and out.suffix == ".csv":
        write_canonical_csv(recordings[0], out)
        log.info("wrote %s", out)
        return 0
    out.mkdir(parents=True, exist_ok=True)
    for rec in recordings:
        path = out / f"{rec.subject_id}.csv"
        write_canonical_csv(rec, path)
        log.info("wrote %s", path)
    return 0


def cmd_features(args):
    config = _load_config(args.config)
    recordings = load_recordings(args.inp)
    _, samples, labels, trial_ids, channels, rate, _ = prepare_windows(recordings, config)
    X, names = extract_feature_matrix(samples, channels, rate, config.features)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial_id", "label", *names])
        for tid, lab, row in zip(trial_ids, labels, X):
            writer.writerow([tid, int(lab), *(f"{v:.9g}" for v in row)])
    log.info("wrote %d feature rows x %d features to %s", len(X), len(names), args.out)
    return 0


def cmd_eval(args):
    config = _load_config(args.config)
    if args.preset:
        config = config.with_preset(args.preset)
    if args.seed is not None:
        config.seed = args.seed
    recordings = [r for path in args.data for r in load_recordings(path)]
    dataset = args.dataset or Path(args.data[0]).stem
    report = cross_validate(recordings, config, dataset)
    table = render_report(report)
    doc = {"report": report.to_dict(), "table": table}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(table)
    return 0


def cmd_compare(args):
    result = compare(EvaluationReport.load(args.report_a), EvaluationReport.load(args.report_b))
    lines = [result["table"], ""]
    for dataset, metrics in result["rows"].items():
        deltas = ", ".join(f"{m} {v['delta']:+.4f}" for m, v in metrics.items())
        lines.append(f"{dataset}: {result['methods'][0]} - {result['methods'][1]}: {deltas}")
    text = "\n".join(lines)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def cmd_synth(args):
    rec = make_synthetic_recording(args.seed, trials_per_class=args.trials_per_class)
    write_canonical_csv(rec, args.out)
    log.info("wrote %s (%d samples)", args.out, rec.n_samples)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="har", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="MHEALTH logs -> canonical CSV")
    c.add_argument("--format", choices=["mhealth"], required=True)
    c.add_argument("--in", dest="inp", required=True, help="directory of mHealth_subject*.log, or one log")
    c.add_argument("--out", required=True, help="a .csv file for a single log, else an output directory")
    c.add_argument("--rate", type=float, default=50.0, help="sampling rate in Hz")
    c.set_defaults(func=cmd_convert)

    f = sub.add_parser("features", help="dump window features as CSV")
    f.add_argument("--config")
    f.add_argument("--in", dest="inp", required=True, help="canonical CSV file or directory")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_features)

    e = sub.add_parser("eval", help="leave-one-trial-out cross-validation")
    e.add_argument("--config")
    e.add_argument("--data", required=True, action="append", help="canonical CSV file or directory (repeatable)")
    e.add_argument("--preset", choices=["proposed", "catal"])
    e.add_argument("--seed", type=int)
    e.add_argument("--dataset", help="dataset name used in reports")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("compare", help="side-by-side table of two reports")
    m.add_argument("report_a")
    m.add_argument("report_b")
    m.add_argument("--out")
    m.set_defaults(func=cmd_compare)

    s = sub.add_parser("synth", help="write the synthetic benchmark recording")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials-per-class", type=int, default=20)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())

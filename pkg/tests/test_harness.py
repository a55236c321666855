import numpy as np
import pytest

from har_ensemble.classifiers import ClassifierSpec
from har_ensemble.dataio import segment_trials
from har_ensemble.ensemble import EnsembleSpec
from har_ensemble.features import FeatureConfig
from har_ensemble.harness import (EvaluationReport, LeakageError, PipelineConfig, PipelineError, compare,
                                  cross_validate, make_synthetic_recording, render_report)
from har_ensemble.harness import evaluation
from har_ensemble.harness.evaluation import summarize
from har_ensemble.windowing import FoldAssignment

LIGHT = EnsembleSpec([ClassifierSpec("gnb"), ClassifierSpec("knn"), ClassifierSpec("logreg", {"epochs": 50})])


def light_config(**kw):
    base = dict(k=5, seed=0, ensemble=LIGHT, method="light")
    base.update(kw)
    return PipelineConfig(**base)


@pytest.fixture(scope="module")
def small_rec():
    return make_synthetic_recording(seed=3, trials_per_class=6)


def test_synthetic_layout():
    rec = make_synthetic_recording(0)
    assert rec.n_samples == 60 * 500
    assert rec.sampling_rate_hz == 50
    trials = segment_trials(rec, 250)
    assert len(trials) == 60
    assert sorted({t.label for t in trials}) == [1, 2, 3]


def test_report_shape(small_rec):
    r = cross_validate([small_rec], light_config(), "tiny")
    assert len(r.folds["accuracy"]) == 5
    assert sum(r.fold_sizes) == r.metadata["n_windows"] == 18 * 3
    assert set(r.members) == {"gnb", "knn", "logreg"}
    assert r.metadata["fft_size"] == 256 and r.metadata["window_samples"] == 250
    for metric, s in r.summary.items():
        assert all(0 <= v <= 1 for v in r.folds[metric])
        assert s["ci"][0] <= s["mean"] <= s["ci"][1]
    assert "tiny" in render_report(r)


def test_deterministic(small_rec):
    a = cross_validate([small_rec], light_config(seed=4), "tiny")
    b = cross_validate([small_rec], light_config(seed=4), "tiny")
    assert a.to_json() == b.to_json()


def test_k_larger_than_trials(small_rec):
    with pytest.raises((PipelineError, ValueError)):
        cross_validate([small_rec], light_config(k=19))


def test_fnow_option(small_rec):
    r = cross_validate([small_rec], light_config(windowing="fnow"))
    assert r.metadata["n_windows"] == 18 * 2


def test_leakage_assertion_fires(monkeypatch, small_rec):
    class Flaky(dict):
        """Hands the first trial to alternating folds on each lookup."""
        calls = 0

        def __getitem__(self, key):
            if key == next(iter(self)):
                Flaky.calls += 1
                return Flaky.calls % 2
            return super().__getitem__(key)

    real = evaluation.loto_folds

    def leaky(trials, k, seed):
        a = real(trials, k, seed)
        return FoldAssignment(a.fold_count, Flaky(a.folds))

    monkeypatch.setattr(evaluation, "loto_folds", leaky)
    with pytest.raises(LeakageError):
        cross_validate([small_rec], light_config())


def test_stage_errors_carry_context(small_rec):
    bad = EnsembleSpec([ClassifierSpec("knn", {"k": 10_000}), ClassifierSpec("gnb")])
    with pytest.raises(PipelineError, match="fold 0, stage fit"):
        cross_validate([small_rec], light_config(ensemble=bad))


def test_strict_mode_reports_abstentions(small_rec):
    spec = EnsembleSpec(LIGHT.members, "unanimous")
    r = cross_validate([small_rec], light_config(ensemble=spec, strict=True))
    assert len(r.metadata["abstentions"]) == 5


def test_config_round_trip(tmp_path):
    cfg = PipelineConfig(window_seconds=2.0, k=4, features=FeatureConfig(n_coeffs=3),
                         ensemble=EnsembleSpec.preset("catal"), method="catal")
    path = tmp_path / "c.json"
    import json
    path.write_text(json.dumps(cfg.to_dict()))
    back = PipelineConfig.load(path)
    assert back.to_dict() == cfg.to_dict()
    with pytest.raises(ValueError, match="unknown config keys"):
        PipelineConfig.from_dict({"windw_seconds": 3})


def test_config_preset_key():
    cfg = PipelineConfig.from_dict({"ensemble": {"preset": "catal"}})
    assert cfg.method == "catal"
    assert cfg.with_preset("proposed").method == "proposed"


def fake_report(rng, method, dataset="d"):
    folds = {m: rng.uniform(0.5, 1.0, size=10).tolist() for m in ("accuracy", "recall", "precision", "fscore")}
    return EvaluationReport(folds, summarize(folds, 0.9), {}, [1] * 10, {"method": method, "dataset": dataset})


def test_compare_self_is_zero(rng):
    r = fake_report(rng, "proposed")
    out = compare(r, r)
    assert all(v["delta"] == 0 for v in out["rows"]["d"].values())


def test_compare_deltas(rng):
    a, b = fake_report(rng, "proposed"), fake_report(rng, "catal")
    out = compare(a, b)
    for metric, row in out["rows"]["d"].items():
        assert row["delta"] == pytest.approx(np.mean(a.folds[metric]) - np.mean(b.folds[metric]), abs=1e-15)
    assert out["methods"] == ["proposed", "catal"]


def test_compare_table_layout(rng):
    pairs = [(fake_report(rng, "proposed", ds), fake_report(rng, "catal", ds)) for ds in ("MHEALTH", "USCHAD")]
    out = compare([p[0] for p in pairs], [p[1] for p in pairs])
    lines = out["table"].splitlines()
    assert "Accuracy" in lines[1] and "Recall" in lines[1] and "F-score" in lines[1]
    # six method columns: three metric groups x two methods
    assert lines[2].count("proposed") == 3 and lines[2].count("catal") == 3
    assert any("MHEALTH" in line for line in lines) and any("USCHAD" in line for line in lines)
    mean_rows = [line for line in lines if line.startswith("| 0.")]
    assert len(mean_rows) == 2 and all(len(r.split()) == 6 + 4 for r in mean_rows)
    assert len({len(line) for line in lines}) == 1

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from har_ensemble.dataio import SensorTrial
from har_ensemble.windowing import fnow_windows, loto_folds, make_windows, snow_windows, window_length


def trial(length, rate=50.0, label=1, trial_id="t0", channels=2):
    samples = np.arange(length * channels, dtype=float).reshape(length, channels)
    return SensorTrial(trial_id, "s", label, samples, rate)


def test_snow_example():
    # 5 s at 50 Hz -> w = 250
    wins = snow_windows(trial(1000), 5.0, 0.5)
    assert [w.start_index for w in wins] == [0, 125, 250, 375, 500, 625, 750]
    assert len(wins) == (1000 - 250) // 125 + 1


def test_snow_zero_overlap_is_fnow():
    t = trial(1000)
    a = snow_windows(t, 5.0, 0.0)
    b = fnow_windows(t, 5.0)
    assert [w.start_index for w in a] == [w.start_index for w in b]
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x.samples, y.samples)


def test_short_trial_gives_no_windows():
    assert snow_windows(trial(249), 5.0) == []
    assert fnow_windows(trial(249), 5.0) == []


def test_fnow_counts():
    assert len(fnow_windows(trial(1000), 5.0)) == 4
    assert len(fnow_windows(trial(2 * 250 - 1), 5.0)) == 1


def test_bad_overlap():
    with pytest.raises(ValueError):
        snow_windows(trial(500), 5.0, 1.0)


def test_window_length_rounds():
    assert window_length(5, 50) == 250
    assert window_length(0.015, 100) == 2  # 1.5 rounds to even


def test_mixed_rates_rejected():
    with pytest.raises(ValueError, match="rates"):
        make_windows([trial(300, 50.0), trial(300, 100.0, trial_id="t1")], 1.0)


@given(length=st.integers(1, 600), w=st.integers(1, 120), overlap=st.sampled_from([0.0, 0.25, 0.5, 0.75]))
@settings(max_examples=200, deadline=None)
def test_window_properties(length, w, overlap):
    t = trial(length, rate=10.0)
    secs = w / 10.0
    snow = snow_windows(t, secs, overlap)
    fnow = fnow_windows(t, secs)
    for win in snow + fnow:
        assert win.samples.shape[0] == w
        assert win.start_index + w <= length
        np.testing.assert_array_equal(win.samples, t.samples[win.start_index:win.start_index + w])
        assert win.label == t.label
    assert len(fnow) == length // w
    stride = max(1, round(w * (1 - overlap)))
    assert len(snow) == (0 if length < w else (length - w) // stride + 1)
    if overlap == 0.5:
        assert len(snow) >= len(fnow)
        if length >= w + w / 2 and w >= 2:
            assert len(snow) > len(fnow)


def trials_with_labels(labels):
    return [SensorTrial(f"t{i}", "s", lab, np.zeros((5, 1)), 10.0) for i, lab in enumerate(labels)]


def test_loto_even_division():
    a = loto_folds(trials_with_labels([i % 3 for i in range(30)]), 10, seed=4)
    sizes = np.bincount(list(a.folds.values()), minlength=10)
    assert sizes.tolist() == [3] * 10


def test_loto_deterministic():
    ts = trials_with_labels([i % 4 for i in range(23)])
    assert loto_folds(ts, 5, seed=9).folds == loto_folds(ts, 5, seed=9).folds
    assert loto_folds(ts, 5, seed=9).folds != loto_folds(ts, 5, seed=10).folds


def test_loto_stratified():
    ts = trials_with_labels([0] * 10 + [1] * 10)
    a = loto_folds(ts, 5, seed=0)
    for fold in range(5):
        labels = [t.label for t in ts if a.folds[t.trial_id] == fold]
        assert sorted(labels) == [0, 0, 1, 1]


def test_loto_too_few_trials():
    with pytest.raises(ValueError):
        loto_folds(trials_with_labels([0] * 3), 4)


@given(labels=st.lists(st.integers(0, 4), min_size=2, max_size=60), k=st.integers(2, 10), seed=st.integers(0, 2**16))
@settings(max_examples=100, deadline=None)
def test_loto_partition(labels, k, seed):
    ts = trials_with_labels(labels)
    if len(ts) < k:
        return
    a = loto_folds(ts, k, seed)
    everything = {t.trial_id for t in ts}
    assert set(a.folds) == everything
    for fold in range(k):
        test, train = a.test_trials(fold), a.train_trials(fold)
        assert test and not (test & train)
        assert test | train == everything

"""Time- and frequency-domain window features.

Everything here is vectorised over a leading batch axis so the harness can
featurise all windows of a dataset in one call; the single-series functions
(`time_features`, `frequency_features`, ...) are thin views over the same
batch code.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _backend
from .dataio import ChannelSpec, group_channels

SCALE_FLOOR = 1e-8


@dataclass(frozen=True)
class FeatureConfig:
    percentiles: tuple[float, ...] = (25.0, 50.0, 75.0)
    entropy_bins: int = 16
    n_coeffs: int = 5
    time: bool = True
    frequency: bool = True  # spectral summaries, FFT magnitudes and DCT coefficients
    correlation: bool = True

    def __post_init__(self):
        object.__setattr__(self, "percentiles", tuple(float(p) for p in self.percentiles))
        if not all(0 < p < 100 for p in self.percentiles):
            raise ValueError(f"percentiles must lie in (0, 100): {self.percentiles}")
        if self.entropy_bins < 2:
            raise ValueError("entropy_bins must be >= 2")
        if self.n_coeffs < 1:
            raise ValueError("n_coeffs must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FeatureVector:
    values: np.ndarray
    feature_names: list[str]
    label: int
    trial_id: str


def _pct_name(p: float) -> str:
    return f"p{p:g}"


def time_feature_names(config: FeatureConfig = FeatureConfig()) -> list[str]:
    return (["mean", "std", "var", "rms"]
            + [_pct_name(p) for p in config.percentiles]
            + ["iqr", "kurtosis_nonexcess", "mad", "entropy"])


def frequency_feature_names(config: FeatureConfig = FeatureConfig()) -> list[str]:
    c = config.n_coeffs
    return (["energy", "dominant_freq", "spectral_centroid", "spectral_entropy"]
            + [f"fft_mag{k}" for k in range(1, c + 1)])


def dct_feature_names(config: FeatureConfig = FeatureConfig()) -> list[str]:
    return [f"dct{k}" for k in range(config.n_coeffs)]


def _triads(channels: Sequence[ChannelSpec]) -> list[tuple[str, list[int]]]:
    """Groups with X/Y/Z members, channel indices sorted by axis."""
    out = []
    for group, idx in group_channels(channels).items():
        axes = {channels[i].axis: i for i in idx}
        if set(axes) == {"X", "Y", "Z"}:
            out.append((group, [axes["X"], axes["Y"], axes["Z"]]))
    return out


def feature_names(channels: Sequence[ChannelSpec], config: FeatureConfig = FeatureConfig()) -> list[str]:
    per_channel = []
    if config.time:
        per_channel += time_feature_names(config)
    if config.frequency:
        per_channel += frequency_feature_names(config) + dct_feature_names(config)
    names = [f"{ch.name}.{f}" for ch in channels for f in per_channel]
    if config.correlation:
        for group, _ in _triads(channels):
            names += [f"{group}.corr_xy", f"{group}.corr_xz", f"{group}.corr_yz"]
    return names


# --- time domain -----------------------------------------------------------

def _time_block(x: np.ndarray, config: FeatureConfig) -> np.ndarray:
    """Time features along the last axis; returns shape x.shape[:-1] + (F,)."""
    n = x.shape[-1]
    if n < 2:
        raise ValueError(f"time features need at least 2 samples, got {n}")
    lo, hi = x.min(axis=-1), x.max(axis=-1)
    flat = hi == lo
    mean = x.mean(axis=-1)
    dev = x - mean[..., None]
    m2 = np.mean(dev**2, axis=-1)
    var = np.where(flat, 0.0, m2 * n / (n - 1))
    std = np.sqrt(var)
    rms = np.sqrt(np.mean(x**2, axis=-1))
    qs = list(config.percentiles) + [25.0, 75.0]
    pct = np.moveaxis(np.percentile(x, qs, axis=-1), 0, -1)
    iqr = pct[..., -1] - pct[..., -2]
    pct = pct[..., :-2]
    kurt = _kurtosis(dev, flat)
    mad = np.where(flat, 0.0, np.mean(np.abs(dev), axis=-1))
    entropy = _hist_entropy(x, lo, hi, config.entropy_bins)
    return np.concatenate(
        [np.stack([mean, std, var, rms], axis=-1), pct,
         np.stack([iqr, kurt, mad, entropy], axis=-1)],
        axis=-1,
    )


def _unit_scale(dev):
    """Deviations divided by their max magnitude (1 where all are zero)."""
    s = np.max(np.abs(dev), axis=-1, keepdims=True)
    return dev / np.where(s > 0, s, 1.0)


def _kurtosis(dev, flat):
    # scale-free, so tiny or huge inputs neither underflow nor overflow
    u = _unit_scale(dev)
    m2 = np.mean(u**2, axis=-1)
    m4 = np.mean(u**4, axis=-1)
    ok = ~flat & (m2 > 0)
    return np.where(ok, m4 / np.where(ok, m2, 1.0) ** 2, 0.0)


def _hist_entropy(x, lo, hi, bins):
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    b = np.floor((x - lo[..., None]) / safe[..., None] * bins).astype(np.int64)
    b = np.clip(b, 0, bins - 1)
    flat_rows = b.reshape(-1, x.shape[-1])
    offsets = np.arange(flat_rows.shape[0])[:, None] * bins
    counts = np.bincount((flat_rows + offsets).ravel(), minlength=flat_rows.shape[0] * bins)
    p = counts.reshape(-1, bins) / x.shape[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.sum(np.where(p > 0, p * np.log(p), 0.0), axis=-1)
    h = h.reshape(x.shape[:-1])
    return np.where(span > 0, h, 0.0)


def time_features(series, config: FeatureConfig = FeatureConfig()) -> dict[str, float]:
    """Named time-domain statistics of one channel series.

    Kurtosis is the non-excess population form m4 / m2**2 (0 for a flat
    series); entropy is over ``entropy_bins`` equal-width bins spanning the
    series' own range.
    """
    x = np.asarray(series, dtype=np.float64)
    values = _time_block(x[None, :], config)[0]
    return dict(zip(time_feature_names(config), values.tolist()))


# --- correlation -----------------------------------------------------------

def _pearson(a, b):
    """Pearson r along the last axis; 0 where either side has zero variance."""
    da = _unit_scale(a - a.mean(axis=-1, keepdims=True))
    db = _unit_scale(b - b.mean(axis=-1, keepdims=True))
    flat = (np.ptp(a, axis=-1) == 0) | (np.ptp(b, axis=-1) == 0)
    num = np.sum(da * db, axis=-1)
    den = np.sqrt(np.sum(da * da, axis=-1) * np.sum(db * db, axis=-1))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(flat | (den == 0), 0.0, num / np.where(den == 0, 1.0, den))
    return np.clip(r, -1.0, 1.0)


def axis_correlations(window: np.ndarray, channels: Sequence[ChannelSpec], sensor_group: str) -> dict[str, float]:
    """Pearson correlations between the X/Y/Z channels of one sensor group.

    ``window`` is a (samples x channels) matrix laid out as ``channels``.
    """
    triads = dict(_triads(channels))
    if sensor_group not in triads:
        raise ValueError(f"{sensor_group!r} is not a 3-axis group")
    w = np.asarray(window, dtype=np.float64)
    ix, iy, iz = triads[sensor_group]
    return {
        "corr_xy": float(_pearson(w[:, ix], w[:, iy])),
        "corr_xz": float(_pearson(w[:, ix], w[:, iz])),
        "corr_yz": float(_pearson(w[:, iy], w[:, iz])),
    }


# --- frequency domain ------------------------------------------------------

def next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def dft(series) -> np.ndarray:
    """Spectrum of ``series`` zero-padded to the next power of two."""
    x = np.asarray(series, dtype=np.complex128).ravel()
    n_fft = next_pow2(len(x))
    padded = np.zeros((1, n_fft), dtype=np.complex128)
    padded[0, : len(x)] = x
    return _backend.fft_rows(padded)[0]


def _dft_batch(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    n_fft = next_pow2(n)
    flat = np.zeros((int(np.prod(x.shape[:-1])), n_fft), dtype=np.complex128)
    flat[:, :n] = x.reshape(-1, n)
    return _backend.fft_rows(flat).reshape(x.shape[:-1] + (n_fft,))


@lru_cache(maxsize=32)
def _dct_basis(n: int, c: int) -> np.ndarray:
    t = np.arange(n)
    k = np.arange(c)[:, None]
    basis = np.cos(np.pi * k * (2 * t + 1) / (2 * n))
    basis.setflags(write=False)
    return basis


def dct2(series, c: int) -> np.ndarray:
    """First ``c`` unnormalised DCT-II coefficients."""
    x = np.asarray(series, dtype=np.float64)
    if x.shape[-1] < c:
        raise ValueError(f"series of length {x.shape[-1]} has fewer than {c} DCT coefficients")
    return x @ _dct_basis(x.shape[-1], c).T


def _spectral_block(spectrum: np.ndarray, rate: float, c: int) -> np.ndarray:
    n_fft = spectrum.shape[-1]
    if n_fft < 4:
        raise ValueError(f"spectral features need N >= 4, got {n_fft}")
    if c > n_fft // 2:
        raise ValueError(f"only {n_fft // 2} non-DC bins available for {c} magnitudes")
    mag = np.abs(spectrum[..., 1 : n_fft // 2 + 1])
    dc = np.abs(spectrum[..., 0])
    total = mag.sum(axis=-1)
    # numerically-zero non-DC spectrum counts as zero
    silent = total <= 1e-12 * np.maximum(1.0, dc)
    mag = np.where(silent[..., None], 0.0, mag)
    power = mag**2
    freqs = np.arange(1, n_fft // 2 + 1) * rate / n_fft
    energy = power.sum(axis=-1) / n_fft
    dominant = freqs[np.argmax(mag, axis=-1)]
    safe_total = np.where(silent, 1.0, total)
    centroid = (mag * freqs).sum(axis=-1) / safe_total
    psum = power.sum(axis=-1)
    p = power / np.where(psum > 0, psum, 1.0)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        sent = -np.sum(np.where(p > 0, p * np.log(p), 0.0), axis=-1)
    summary = np.stack([energy, dominant, centroid, sent], axis=-1)
    summary = np.where(silent[..., None], 0.0, summary)
    return np.concatenate([summary, mag[..., :c]], axis=-1)


def frequency_features(spectrum, sampling_rate: float, c: int = 5) -> dict[str, float]:
    """Spectral summaries over the non-DC bins 1..N/2 of a ``dft`` output."""
    spec = np.asarray(spectrum, dtype=np.complex128)
    values = _spectral_block(spec[None, :], sampling_rate, c)[0]
    return dict(zip(frequency_feature_names(FeatureConfig(n_coeffs=c)), values.tolist()))


# --- assembly --------------------------------------------------------------

def extract_feature_matrix(windows: np.ndarray, channels: Sequence[ChannelSpec], sampling_rate: float,
                           config: FeatureConfig = FeatureConfig()) -> tuple[np.ndarray, list[str]]:
    """Feature matrix for a stack of windows shaped (n_windows, samples, channels)."""
    w = np.asarray(windows, dtype=np.float64)
    if w.ndim != 3 or w.shape[2] != len(channels):
        raise ValueError(f"expected (n_windows, samples, {len(channels)}) windows, got {w.shape}")
    series = np.swapaxes(w, 1, 2)  # (n_windows, channels, samples)
    blocks = []
    if config.time:
        blocks.append(_time_block(series, config))
    if config.frequency:
        blocks.append(_spectral_block(_dft_batch(series), sampling_rate, config.n_coeffs))
        blocks.append(dct2(series, config.n_coeffs))
    parts = []
    if blocks:
        parts.append(np.concatenate(blocks, axis=-1).reshape(w.shape[0], -1))
    if config.correlation:
        for _, (ix, iy, iz) in _triads(channels):
            parts.append(np.stack([
                _pearson(series[:, ix], series[:, iy]),
                _pearson(series[:, ix], series[:, iz]),
                _pearson(series[:, iy], series[:, iz]),
            ], axis=-1))
    matrix = np.concatenate(parts, axis=-1) if parts else np.zeros((w.shape[0], 0))
    if not np.all(np.isfinite(matrix)):
        raise FloatingPointError("non-finite feature value; check the input range")
    return matrix, feature_names(channels, config)


def extract_feature_vector(window, config: FeatureConfig = FeatureConfig(), channels=None) -> FeatureVector:
    """Features of one :class:`~har_ensemble.windowing.Window`.

    ``channels`` defaults to unnamed scalar channels when the window does not
    carry its own layout.
    """
    samples = np.asarray(window.samples, dtype=np.float64)
    if channels is None:
        channels = [ChannelSpec(f"ch{i}_value", f"ch{i}", "scalar") for i in range(samples.shape[1])]
    matrix, names = extract_feature_matrix(samples[None], channels, window.sampling_rate_hz, config)
    return FeatureVector(matrix[0], names, window.label, window.trial_id)


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    def apply(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.mean.shape[0]:
            raise ValueError(f"expected {self.mean.shape[0]} features, got {X.shape[-1]}")
        return (X - self.mean) / self.scale


def fit_standardizer(X) -> Standardizer:
    """Per-feature mean and sample std (floored at 1e-8) of training rows."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("need at least 2 training vectors to standardise")
    mean = X.mean(axis=0)
    scale = np.maximum(X.std(axis=0, ddof=1), SCALE_FLOOR)
    # a column whose values are all equal must standardise to exactly zero
    constant = np.ptp(X, axis=0) == 0
    mean = np.where(constant, X[0], mean)
    return Standardizer(mean, scale)


def apply_standardizer(s: Standardizer, X) -> np.ndarray:
    return s.apply(X)

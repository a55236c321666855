"""Sensor recording ingestion and trial segmentation.

Two on-disk formats are understood:

* MHEALTH raw logs: whitespace-delimited, 24 numeric columns, label last.
* Canonical CSV, the common exchange format for every other dataset::

      #meta subject=<id> rate_hz=<r> [labelmap=<name>]
      label,<group>_<axis>,<group>_<axis>,...
      <label>,<value>,<value>,...
"""
from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

logger = logging.getLogger(__name__)

AXES = ("X", "Y", "Z")

MHEALTH_RATE_HZ = 50.0
USCHAD_RATE_HZ = 100.0

MHEALTH_LABELS = {
    0: "null",
    1: "standing still",
    2: "sitting and relaxing",
    3: "lying down",
    4: "walking",
    5: "climbing stairs",
    6: "waist bends forward",
    7: "frontal elevation of arms",
    8: "knees bending",
    9: "cycling",
    10: "jogging",
    11: "running",
    12: "jump front and back",
}

USCHAD_LABELS = {
    1: "walking forward",
    2: "walking left",
    3: "walking right",
    4: "walking upstairs",
    5: "walking downstairs",
    6: "running forward",
    7: "jumping up",
    8: "sitting",
    9: "standing",
    10: "sleeping",
    11: "elevator up",
    12: "elevator down",
}

SYNTH_LABELS = {1: "slow", 2: "medium", 3: "fast"}

LABEL_MAPS = {"mhealth": MHEALTH_LABELS, "usc-had": USCHAD_LABELS, "synth": SYNTH_LABELS}


class DataFormatError(ValueError):
    """Raised for malformed recordings; messages carry the offending line."""


@dataclass(frozen=True)
class ChannelSpec:
    name: str
    sensor_group: str
    axis: str  # "X", "Y", "Z" or "scalar"

    @classmethod
    def from_name(cls, name: str) -> "ChannelSpec":
        group, sep, suffix = name.rpartition("_")
        if not sep or not group or not suffix:
            raise DataFormatError(f"channel name {name!r} is not of the form <group>_<axis>")
        axis = suffix.upper() if suffix.upper() in AXES else "scalar"
        return cls(name, group, axis)


def _mhealth_channels() -> list[ChannelSpec]:
    names = ["chest-acc_x", "chest-acc_y", "chest-acc_z", "ecg_lead1", "ecg_lead2"]
    for place in ("ankle", "wrist"):
        for sensor in ("acc", "gyro", "mag"):
            names += [f"{place}-{sensor}_{a}" for a in "xyz"]
    return [ChannelSpec.from_name(n) for n in names]


MHEALTH_CHANNELS = tuple(_mhealth_channels())
MHEALTH_MOTION_GROUPS = (
    "chest-acc", "ankle-acc", "ankle-gyro", "ankle-mag", "wrist-acc", "wrist-gyro", "wrist-mag",
)


def validate_channels(channels: Sequence[ChannelSpec]) -> None:
    names = [c.name for c in channels]
    if len(set(names)) != len(names):
        raise DataFormatError(f"duplicate channel names in {names}")
    for group, members in group_channels(channels).items():
        axes = [channels[i].axis for i in members]
        if any(a != "scalar" for a in axes) and sorted(axes) != list(AXES):
            raise DataFormatError(f"group {group!r} must have exactly one X, Y and Z channel, got {axes}")


def group_channels(channels: Sequence[ChannelSpec]) -> dict[str, list[int]]:
    """Group name -> channel indices, in first-appearance order."""
    groups: dict[str, list[int]] = {}
    for i, c in enumerate(channels):
        groups.setdefault(c.sensor_group, []).append(i)
    return groups


@dataclass
class LabeledRecording:
    subject_id: str
    sampling_rate_hz: float
    channels: list[ChannelSpec]
    samples: np.ndarray
    labels: np.ndarray
    label_map: dict[int, str] | None = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.samples.ndim != 2:
            raise DataFormatError("samples must be a 2-D matrix")
        n, width = self.samples.shape
        if n < 1:
            raise DataFormatError("a recording needs at least one sample")
        if width != len(self.channels):
            raise DataFormatError(f"{width} sample columns but {len(self.channels)} channels")
        if self.labels.shape != (n,):
            raise DataFormatError(f"{len(self.labels)} labels for {n} samples")
        if not self.sampling_rate_hz > 0:
            raise DataFormatError(f"sampling rate must be positive, got {self.sampling_rate_hz}")
        validate_channels(self.channels)
        if self.label_map is not None:
            unknown = sorted(set(np.unique(self.labels).tolist()) - set(self.label_map))
            if unknown:
                raise DataFormatError(f"label codes {unknown} not in the declared label map")

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def channel_names(self) -> list[str]:
        return [c.name for c in self.channels]

    @property
    def groups(self) -> list[str]:
        return list(group_channels(self.channels))


@dataclass
class SensorTrial:
    trial_id: str
    subject_id: str
    label: int
    samples: np.ndarray
    sampling_rate_hz: float
    channels: list[ChannelSpec] = field(default_factory=list)

    def __len__(self):
        return self.samples.shape[0]


def parse_mhealth_log(stream: TextIO | str, subject_id: str,
                      sampling_rate_hz: float = MHEALTH_RATE_HZ) -> LabeledRecording:
    """Parse one MHEALTH ``mHealth_subject<N>.log`` stream.

    All 23 sensor channels are kept (ECG included); drop ECG with
    :func:`select_channels`.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    rows, labels = [], []
    for lineno, line in enumerate(stream, start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 24:
            raise DataFormatError(f"line {lineno}: expected 24 columns, got {len(fields)}")
        try:
            values = [float(v) for v in fields[:23]]
            label = float(fields[23])
        except ValueError as exc:
            raise DataFormatError(f"line {lineno}: non-numeric field ({exc})") from None
        if label != int(label):
            raise DataFormatError(f"line {lineno}: label {fields[23]!r} is not an integer")
        rows.append(values)
        labels.append(int(label))
    if not rows:
        raise DataFormatError("empty MHEALTH stream")
    return LabeledRecording(subject_id, sampling_rate_hz, list(MHEALTH_CHANNELS),
                            np.array(rows), np.array(labels), dict(MHEALTH_LABELS))


_META_RE = re.compile(r"(\w+)=(\S+)")


def load_canonical_csv(path: str | Path | TextIO) -> LabeledRecording:
    if isinstance(path, (str, Path)):
        with open(path) as fh:
            return load_canonical_csv(fh)
    meta_line = path.readline().strip()
    if not meta_line.startswith("#meta"):
        raise DataFormatError("line 1: missing '#meta subject=<id> rate_hz=<r>' header")
    meta = dict(_META_RE.findall(meta_line))
    for key in ("subject", "rate_hz"):
        if key not in meta:
            raise DataFormatError(f"line 1: meta header lacks {key}=")
    try:
        rate = float(meta["rate_hz"])
    except ValueError:
        raise DataFormatError(f"line 1: rate_hz={meta['rate_hz']!r} is not a number") from None
    label_map = None
    if "labelmap" in meta:
        if meta["labelmap"] not in LABEL_MAPS:
            raise DataFormatError(f"line 1: unknown labelmap {meta['labelmap']!r}; known: {sorted(LABEL_MAPS)}")
        label_map = dict(LABEL_MAPS[meta["labelmap"]])

    header = path.readline().strip().split(",")
    if len(header) < 2 or header[0] != "label":
        raise DataFormatError("line 2: header must be 'label,<group>_<axis>,...'")
    channels = [ChannelSpec.from_name(h.strip()) for h in header[1:]]

    rows, labels = [], []
    for lineno, line in enumerate(path, start=3):
        line = line.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise DataFormatError(f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
        try:
            labels.append(int(fields[0]))
            rows.append([float(v) for v in fields[1:]])
        except ValueError as exc:
            raise DataFormatError(f"line {lineno}: {exc}") from None
    if not rows:
        raise DataFormatError("canonical CSV has no sample rows")
    if label_map is not None:
        unknown = sorted(set(labels) - set(label_map))
        if unknown:
            raise DataFormatError(f"unknown label codes {unknown} for labelmap {meta['labelmap']!r}")
    return LabeledRecording(meta["subject"], rate, channels, np.array(rows), np.array(labels), label_map)


def _label_map_name(label_map):
    for name, known in LABEL_MAPS.items():
        if label_map == known:
            return name
    return None


def write_canonical_csv(recording: LabeledRecording, path: str | Path | TextIO,
                        extra_columns: dict[str, Sequence] | None = None) -> None:
    """Write ``recording`` with 9 significant digits per value.

    ``extra_columns`` are appended after the channels (window dumps use a
    ``window_id`` column this way).
    """
    if isinstance(path, (str, Path)):
        with open(path, "w") as fh:
            write_canonical_csv(recording, fh, extra_columns)
        return
    meta = f"#meta subject={recording.subject_id} rate_hz={recording.sampling_rate_hz:.9g}"
    map_name = _label_map_name(recording.label_map)
    if map_name:
        meta += f" labelmap={map_name}"
    extra_columns = extra_columns or {}
    path.write(meta + "\n")
    path.write(",".join(["label", *recording.channel_names, *extra_columns]) + "\n")
    extras = list(zip(*extra_columns.values())) if extra_columns else None
    for i, (label, row) in enumerate(zip(recording.labels, recording.samples)):
        cells = [str(int(label))] + [f"{v:.9g}" for v in row]
        if extras:
            cells += [str(v) for v in extras[i]]
        path.write(",".join(cells) + "\n")


def select_channels(recording: LabeledRecording, group_names: Iterable[str]) -> LabeledRecording:
    groups = group_channels(recording.channels)
    wanted = list(group_names)
    missing = [g for g in wanted if g not in groups]
    if missing:
        raise KeyError(f"unknown channel groups {missing}; available: {list(groups)}")
    keep = sorted(i for g in set(wanted) for i in groups[g])
    return LabeledRecording(
        recording.subject_id,
        recording.sampling_rate_hz,
        [recording.channels[i] for i in keep],
        recording.samples[:, keep],
        recording.labels.copy(),
        recording.label_map,
    )


def label_runs(labels: np.ndarray) -> list[tuple[int, int]]:
    """(start, stop) of every maximal constant-label run."""
    labels = np.asarray(labels)
    if labels.size == 0:
        return []
    cuts = np.flatnonzero(labels[1:] != labels[:-1]) + 1
    starts = np.concatenate(([0], cuts))
    stops = np.concatenate((cuts, [labels.size]))
    return list(zip(starts.tolist(), stops.tolist()))


def segment_trials(recording: LabeledRecording, min_trial_len: int = 1,
                   drop_labels: Iterable[int] = ()) -> list[SensorTrial]:
    """Split a recording into its maximal constant-label runs.

    Runs shorter than ``min_trial_len`` and runs whose label is in
    ``drop_labels`` are discarded; ids are ``<subject>:<run index>`` so they
    stay unique across subjects.
    """
    if min_trial_len < 1:
        raise ValueError("min_trial_len must be >= 1")
    drop = set(drop_labels)
    trials = []
    for run, (start, stop) in enumerate(label_runs(recording.labels)):
        label = int(recording.labels[start])
        if stop - start < min_trial_len or label in drop:
            continue
        trials.append(SensorTrial(
            trial_id=f"{recording.subject_id}:{run}",
            subject_id=recording.subject_id,
            label=label,
            samples=recording.samples[start:stop],
            sampling_rate_hz=recording.sampling_rate_hz,
            channels=list(recording.channels),
        ))
    return trials


def load_mhealth_dir(directory: str | Path, sampling_rate_hz: float = MHEALTH_RATE_HZ) -> list[LabeledRecording]:
    """Read every ``mHealth_subject<N>.log`` in ``directory``, ordered by subject number."""
    paths = sorted(Path(directory).glob("mHealth_subject*.log"),
                   key=lambda p: int(re.sub(r"\D", "", p.stem) or 0))
    if not paths:
        raise FileNotFoundError(f"no mHealth_subject*.log files in {directory}")
    recordings = []
    for p in paths:
        subject = re.sub(r"\D", "", p.stem) or p.stem
        logger.info("parsing %s", p)
        with open(p) as fh:
            recordings.append(parse_mhealth_log(fh, f"mhealth{subject}", sampling_rate_hz))
    return recordings


def load_recordings(path: str | Path) -> list[LabeledRecording]:
    """A canonical CSV file, or every ``*.csv`` in a directory (sorted by name)."""
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
        if not files:
            raise FileNotFoundError(f"no .csv files in {path}")
        return [load_canonical_csv(f) for f in files]
    return [load_canonical_csv(path)]

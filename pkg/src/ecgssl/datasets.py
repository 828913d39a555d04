"""Pretext/downstream dataset construction and binary persistence.

The segment file format (little-endian):

    magic   4 bytes  b"ECGS"
    version u16      currently 1
    rate    u32      sample rate in Hz
    seg_len u32      samples per row
    count   u64      number of rows
    rows:   per row a u8 label followed by seg_len float32 samples

A sidecar ``<name>.subjects.csv`` (row_index, subject_id) is written next
to the binary when subject identities are known, so subject-level fold
splitting stays possible after a round trip.
"""

from __future__ import annotations

import csv
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, InvalidInputError, InvalidParameterError
from .rng import substream
from .signals import Segment
from .transforms import TransformId, TransformSpec, apply

__all__ = [
    "PretextDataset",
    "EmotionDataset",
    "build_pretext",
    "kfold_split",
    "kfold_split_by_subject",
    "write_segments",
    "read_segments",
    "read_subjects_sidecar",
    "write_label_manifest",
    "read_label_manifest",
    "SegmentStore",
]

_MAGIC = b"ECGS"
_VERSION = 1


@dataclass
class PretextDataset:
    """Balanced 7-class transformation-recognition dataset."""

    inputs: np.ndarray  # (n, seg_len) float64
    labels: np.ndarray  # (n,) transform ids
    spec: TransformSpec

    def __post_init__(self):
        if self.inputs.shape[0] != self.labels.shape[0]:
            raise InvalidInputError("inputs and labels disagree on row count")

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass
class EmotionDataset:
    """Labeled downstream dataset."""

    inputs: np.ndarray  # (n, seg_len) float64
    labels: np.ndarray  # (n,) ints in [0, class_count)
    class_count: int
    attribute_name: str = "arousal"
    subjects: list[str] | None = field(default=None)

    def __post_init__(self):
        if self.inputs.shape[0] != self.labels.shape[0]:
            raise InvalidInputError("inputs and labels disagree on row count")
        if self.class_count < 2:
            raise InvalidInputError("need at least 2 classes")
        if len(self) and self.labels.max() >= self.class_count:
            raise InvalidInputError("label outside [0, class_count)")

    def __len__(self) -> int:
        return self.inputs.shape[0]


def build_pretext(segments: list[Segment] | np.ndarray, spec: TransformSpec, seed: int) -> PretextDataset:
    """Expand segments into the original + six transformed versions each.

    The rows are shuffled with a seeded permutation; per-(segment,
    transform) noise streams are derived from the same seed so the result
    is reproducible regardless of evaluation order.
    """
    if isinstance(segments, np.ndarray):
        matrix = np.asarray(segments, dtype=np.float64)
        if matrix.ndim != 2:
            raise InvalidInputError("segment matrix must be 2D")
    else:
        if len(segments) == 0:
            raise InvalidInputError("no segments given")
        lengths = {len(s) for s in segments}
        if len(lengths) != 1:
            raise InvalidInputError(f"segments have mixed lengths: {sorted(lengths)}")
        matrix = np.stack([s.samples for s in segments])
    n, seg_len = matrix.shape
    if n == 0:
        raise InvalidInputError("no segments given")

    inputs = np.empty((7 * n, seg_len), dtype=np.float64)
    labels = np.empty(7 * n, dtype=np.int64)
    row = 0
    for tid in range(7):
        for i in range(n):
            stream = substream(seed, "transform", i, tid)
            inputs[row] = apply(matrix[i], tid, spec, rng=stream)
            labels[row] = tid
            row += 1

    order = substream(seed, "pretext-shuffle").permutation(7 * n)
    return PretextDataset(inputs[order], labels[order], spec)


def kfold_split(n: int, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Seeded k-fold partition of range(n); fold sizes differ by at most 1."""
    if k < 2:
        raise InvalidParameterError(f"k must be >= 2, got {k}")
    if n < k:
        raise InvalidParameterError(f"cannot split {n} items into {k} folds")
    order = substream(seed, "kfold").permutation(n)
    folds = np.array_split(order, k)
    out = []
    for i, test in enumerate(folds):
        train = np.concatenate([folds[j] for j in range(k) if j != i])
        out.append((np.sort(train), np.sort(test)))
    return out


def kfold_split_by_subject(subjects: list[str], k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Fold assignment at subject granularity (non-default protocol).

    All rows of a subject land in the same fold, so train and test never
    share a person.
    """
    unique = sorted(set(subjects))
    if k < 2:
        raise InvalidParameterError(f"k must be >= 2, got {k}")
    if len(unique) < k:
        raise InvalidParameterError(f"{len(unique)} subjects cannot fill {k} folds")
    order = substream(seed, "kfold-subject").permutation(len(unique))
    groups = np.array_split(order, k)
    subject_arr = np.asarray(subjects)
    out = []
    for i in range(k):
        test_subjects = {unique[j] for j in groups[i]}
        mask = np.isin(subject_arr, sorted(test_subjects))
        idx = np.arange(len(subjects))
        out.append((idx[~mask], idx[mask]))
    return out


def write_segments(path, inputs: np.ndarray, labels: np.ndarray, sample_rate: int,
                   subjects: list[str] | None = None) -> None:
    inputs = np.asarray(inputs)
    labels = np.asarray(labels)
    if inputs.ndim != 2:
        raise InvalidInputError("inputs must be a 2D matrix")
    if inputs.shape[0] != labels.shape[0]:
        raise InvalidInputError("inputs and labels disagree on row count")
    if len(labels) and (labels.min() < 0 or labels.max() > 255):
        raise InvalidInputError("labels must fit in a byte")
    n, seg_len = inputs.shape
    data32 = np.ascontiguousarray(inputs, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<HIIQ", _VERSION, int(sample_rate), seg_len, n))
        for i in range(n):
            fh.write(struct.pack("<B", int(labels[i])))
            fh.write(data32[i].tobytes())
    if subjects is not None:
        if len(subjects) != n:
            raise InvalidInputError("subjects list must match row count")
        with open(str(path) + ".subjects.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["row_index", "subject_id"])
            for i, s in enumerate(subjects):
                writer.writerow([i, s])


def read_segments(path) -> tuple[np.ndarray, np.ndarray, int]:
    """Read a segment file; returns (inputs float64, labels, sample_rate)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
        header = fh.read(18)
        if len(header) != 18:
            raise FormatError(f"{path}: truncated header")
        version, rate, seg_len, count = struct.unpack("<HIIQ", header)
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported version {version}")
        row_bytes = 1 + 4 * seg_len
        payload = fh.read(row_bytes * count)
        if len(payload) != row_bytes * count:
            raise FormatError(
                f"{path}: payload holds {len(payload)} bytes, "
                f"expected {row_bytes * count} for {count} rows of {seg_len}"
            )
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after declared rows")
    raw = np.frombuffer(payload, dtype=np.uint8).reshape(count, row_bytes)
    labels = raw[:, 0].astype(np.int64)
    inputs = raw[:, 1:].copy().view("<f4").astype(np.float64)
    return inputs, labels, rate


def read_subjects_sidecar(path) -> list[str] | None:
    sidecar = str(path) + ".subjects.csv"
    if not os.path.exists(sidecar):
        return None
    with open(sidecar, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["row_index", "subject_id"]:
        raise FormatError(f"{sidecar}: bad subjects manifest header")
    return [r[1] for r in rows[1:]]


def write_label_manifest(path, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_index", "class"])
        for i, lab in enumerate(labels):
            writer.writerow([i, int(lab)])


def read_label_manifest(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["row_index", "class"]:
        raise FormatError(f"{path}: bad label manifest header")
    labels = np.empty(len(rows) - 1, dtype=np.int64)
    for r in rows[1:]:
        labels[int(r[0])] = int(r[1])
    return labels


class SegmentStore:
    """Convenience bundle of (inputs, labels, rate, subjects) from one file."""

    def __init__(self, inputs, labels, sample_rate, subjects=None):
        self.inputs = inputs
        self.labels = labels
        self.sample_rate = sample_rate
        self.subjects = subjects

    @classmethod
    def load(cls, path) -> "SegmentStore":
        inputs, labels, rate = read_segments(path)
        return cls(inputs, labels, rate, read_subjects_sidecar(path))

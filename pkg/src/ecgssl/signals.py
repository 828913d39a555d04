"""Signal representation, preprocessing and segmentation.

The preprocessing chain mirrors a minimal ECG pipeline: resample to a
common rate, remove baseline wander with a high-pass IIR filter, z-score
per subject, then cut into fixed, non-overlapping windows.  All arithmetic
is float64; functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import butter, fftconvolve, firwin, lfilter

from .errors import DegenerateInputError, FormatError, InvalidInputError, InvalidParameterError

__all__ = [
    "Signal",
    "Segment",
    "resample",
    "remove_baseline_wander",
    "zscore_per_subject",
    "segment",
    "read_signal_csv",
    "write_signal_csv",
]

#: High-pass cutoff for baseline-wander removal, Hz.
BASELINE_CUTOFF_HZ = 0.8

#: Anti-alias low-pass cutoff as a fraction of the target rate.
ANTIALIAS_FRACTION = 0.45


@dataclass
class Signal:
    """A uniformly sampled 1D record.

    Attributes
    ----------
    samples : float64 array of amplitudes
    sample_rate : sampling rate in Hz, positive integer
    subject_id : opaque identity used for person-specific normalization
    label : optional integer class attached to the whole record
    """

    samples: np.ndarray
    sample_rate: int
    subject_id: str = "s0"
    label: int | None = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise InvalidInputError("signal must be a non-empty 1D array")
        if not np.all(np.isfinite(self.samples)):
            raise InvalidInputError("signal contains non-finite samples")
        if int(self.sample_rate) <= 0:
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")
        self.sample_rate = int(self.sample_rate)

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate

    def replace(self, samples: np.ndarray) -> "Signal":
        return Signal(samples, self.sample_rate, self.subject_id, self.label)


@dataclass
class Segment:
    """A fixed-length window cut from a Signal."""

    samples: np.ndarray
    source: tuple[str, int] = field(default=("s0", 0))
    label: int | None = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise InvalidInputError("segment must be a non-empty 1D array")
        if not np.all(np.isfinite(self.samples)):
            raise InvalidInputError("segment contains non-finite samples")

    def __len__(self) -> int:
        return self.samples.size


def resample(signal: Signal, target_rate: int) -> Signal:
    """Resample to ``target_rate`` Hz.

    Equal rates return the input samples unchanged (bit-exact).  When
    downsampling, a windowed-sinc low-pass at ``0.45 * target_rate`` is
    applied first, then the filtered signal is linearly interpolated at the
    target sample instants.  Upsampling interpolates directly.  The output
    duration matches the input within one sample period.
    """
    if target_rate <= 0:
        raise InvalidParameterError(f"target_rate must be positive, got {target_rate}")
    src_rate = signal.sample_rate
    if target_rate == src_rate:
        return signal.replace(signal.samples)

    x = signal.samples
    n_in = x.size
    if src_rate > target_rate:
        cutoff = ANTIALIAS_FRACTION * target_rate
        # Hamming-window FIR; tap count sized for a transition band of
        # ~0.05 * target_rate, reflected padding to suppress edge ringing.
        numtaps = int(np.ceil(3.3 / (0.05 * target_rate / src_rate)))
        numtaps += 1 - numtaps % 2  # odd, so the kernel is symmetric
        numtaps = min(numtaps, 2 * n_in - 1)
        numtaps = max(numtaps, 3)
        h = firwin(numtaps, cutoff, fs=src_rate, window="hamming")
        half = numtaps // 2
        pad = min(half, n_in - 1)
        xp = np.pad(x, pad, mode="reflect")
        x = fftconvolve(xp, h, mode="same")[pad : pad + n_in]

    n_out = int(round(n_in * target_rate / src_rate))
    positions = np.arange(n_out) * (src_rate / target_rate)
    y = np.interp(positions, np.arange(n_in), x)
    return Signal(y, target_rate, signal.subject_id, signal.label)


def _baseline_filter_coeffs(sample_rate: int):
    # 2nd-order Butterworth high-pass, single forward pass (not zero-phase);
    # the phase distortion below ~1 Hz is accepted and documented.
    return butter(2, BASELINE_CUTOFF_HZ, btype="highpass", fs=sample_rate)


def remove_baseline_wander(signal: Signal) -> Signal:
    """High-pass the record at 0.8 Hz to remove baseline drift and DC."""
    if signal.sample_rate < 2:
        raise InvalidInputError("sample rate must be at least 2 Hz for baseline filtering")
    b, a = _baseline_filter_coeffs(signal.sample_rate)
    y = lfilter(b, a, signal.samples)
    return signal.replace(y)


def zscore_per_subject(signals: list[Signal]) -> list[Signal]:
    """Standardize each subject's pooled samples to mean 0, std 1.

    Statistics are pooled over all of a subject's records (population
    standard deviation), so a subject split across several signals is
    normalized consistently.
    """
    by_subject: dict[str, list[int]] = {}
    for i, s in enumerate(signals):
        by_subject.setdefault(s.subject_id, []).append(i)

    out: list[Signal | None] = [None] * len(signals)
    for subject, idxs in by_subject.items():
        pooled = np.concatenate([signals[i].samples for i in idxs])
        mean = pooled.mean()
        std = pooled.std()
        if std == 0.0:
            raise DegenerateInputError(f"subject {subject!r} has zero variance, cannot z-score")
        for i in idxs:
            out[i] = signals[i].replace((signals[i].samples - mean) / std)
    return out  # type: ignore[return-value]


def segment(signal: Signal, window_seconds: float) -> list[Segment]:
    """Cut into non-overlapping windows; a trailing partial window is dropped."""
    if window_seconds <= 0:
        raise InvalidParameterError(f"window_seconds must be positive, got {window_seconds}")
    window = int(round(signal.sample_rate * window_seconds))
    if window < 1:
        raise InvalidParameterError("window is shorter than one sample")
    count = signal.samples.size // window
    return [
        Segment(
            signal.samples[i * window : (i + 1) * window].copy(),
            source=(signal.subject_id, i * window),
            label=signal.label,
        )
        for i in range(count)
    ]


# ---------------------------------------------------------------------------
# Generic raw-signal CSV: header `subject_id,sample_rate,label`, then one
# sample value per row.  Several records may be concatenated in one file by
# repeating the header line.


def write_signal_csv(path, signals: list[Signal]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for s in signals:
            label = "" if s.label is None else int(s.label)
            writer.writerow(["subject_id", "sample_rate", "label"])
            writer.writerow([s.subject_id, s.sample_rate, label])
            for v in s.samples:
                writer.writerow([repr(float(v))])


def read_signal_csv(path) -> list[Signal]:
    signals: list[Signal] = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    i = 0
    while i < len(rows):
        if rows[i][:3] != ["subject_id", "sample_rate", "label"]:
            raise FormatError(f"{path}: expected record header at row {i + 1}")
        if i + 1 >= len(rows):
            raise FormatError(f"{path}: truncated record header")
        subject_id, rate_s, label_s = rows[i + 1][:3]
        i += 2
        values = []
        while i < len(rows) and rows[i][:1] != ["subject_id"]:
            values.append(float(rows[i][0]))
            i += 1
        try:
            rate = int(rate_s)
        except ValueError as e:
            raise FormatError(f"{path}: bad sample_rate {rate_s!r}") from e
        label = None if label_s == "" else int(label_s)
        signals.append(Signal(np.array(values), rate, subject_id, label))
    return signals

"""The six parameterized signal transformations used as pretext tasks.

Each transformation takes a 1D segment and returns a new array of the same
length.  Stochastic transformations accept a seed or Generator and are
bit-reproducible.  Transformation identifiers double as class labels:
0 is the untouched original, 1..6 the transformations below.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError

__all__ = [
    "TransformId",
    "TransformSpec",
    "add_noise",
    "scale",
    "negate",
    "invert_time",
    "permute",
    "time_warp",
    "apply",
]


class TransformId(IntEnum):
    ORIGINAL = 0
    NOISE = 1
    SCALE = 2
    NEGATE = 3
    INVERT_TIME = 4
    PERMUTE = 5
    TIME_WARP = 6


@dataclass(frozen=True)
class TransformSpec:
    """Parameter vector controlling the six transformations.

    Defaults are the tuned values (snr 15 dB, scale 0.9, 20 permutation
    pieces, 9 time-warp pieces, stretch 1.05).
    """

    snr_db: float = 15.0
    scale_factor: float = 0.9
    permutation_segments: int = 20
    timewarp_segments: int = 9
    stretch_factor: float = 1.05
    rng_seed: int = 0

    def __post_init__(self):
        if not self.scale_factor > 0:
            raise InvalidParameterError(f"scale_factor must be > 0, got {self.scale_factor}")
        if self.permutation_segments < 1:
            raise InvalidParameterError("permutation_segments must be >= 1")
        if self.timewarp_segments < 1:
            raise InvalidParameterError("timewarp_segments must be >= 1")
        if self.stretch_factor < 1:
            raise InvalidParameterError(f"stretch_factor must be >= 1, got {self.stretch_factor}")


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def add_noise(x: np.ndarray, snr_db: float, rng) -> np.ndarray:
    """Add zero-mean Gaussian noise at the requested signal-to-noise ratio.

    The signal's average power in dB is ``p_sig = 10*log10(mean(x**2))``;
    the noise variance is ``10**((p_sig - snr_db)/10)`` so that the expected
    measured SNR equals ``snr_db``.
    """
    x = np.asarray(x, dtype=np.float64)
    mean_power = float(np.mean(x * x))
    if mean_power == 0.0:
        raise DegenerateInputError("all-zero segment: signal power (and SNR) undefined")
    p_sig_db = 10.0 * np.log10(mean_power)
    noise_var = 10.0 ** ((p_sig_db - snr_db) / 10.0)
    noise = _as_rng(rng).normal(0.0, np.sqrt(noise_var), size=x.shape)
    return x + noise


def scale(x: np.ndarray, beta: float) -> np.ndarray:
    """Multiply every sample by ``beta`` (> 0)."""
    if not beta > 0:
        raise InvalidParameterError(f"scaling factor must be > 0, got {beta}")
    return np.asarray(x, dtype=np.float64) * beta


def negate(x: np.ndarray) -> np.ndarray:
    """Flip the segment vertically (multiply by -1)."""
    return -np.asarray(x, dtype=np.float64)


def invert_time(x: np.ndarray) -> np.ndarray:
    """Reverse the segment along the time axis."""
    return np.asarray(x, dtype=np.float64)[::-1].copy()


def _split_points(n: int, m: int) -> np.ndarray:
    # Piece boundaries with the remainder spread over the leading pieces,
    # one extra sample each (the same split numpy.array_split produces).
    base, extra = divmod(n, m)
    sizes = np.full(m, base, dtype=np.int64)
    sizes[:extra] += 1
    return np.concatenate([[0], np.cumsum(sizes)])


def permute(x: np.ndarray, m: int, rng) -> np.ndarray:
    """Split into ``m`` pieces and reassemble them in seeded random order."""
    x = np.asarray(x, dtype=np.float64)
    if m < 1 or m > x.size:
        raise InvalidParameterError(f"piece count {m} not in [1, {x.size}]")
    bounds = _split_points(x.size, m)
    order = _as_rng(rng).permutation(m)
    return np.concatenate([x[bounds[i] : bounds[i + 1]] for i in order])


def _warp_piece(piece: np.ndarray, factor: float) -> np.ndarray:
    # Linear interpolation onto a resampled index grid; factor 1 is exact
    # identity because the grid then coincides with the original indices.
    n = piece.size
    new_n = max(1, int(round(n * factor)))
    if n == 1:
        return np.repeat(piece, new_n)
    grid = np.linspace(0.0, n - 1.0, new_n)
    return np.interp(grid, np.arange(n), piece)


def time_warp(x: np.ndarray, m: int, k: float, rng) -> np.ndarray:
    """Stretch a random half of the pieces by ``k``, squeeze the rest by ``1/k``.

    Pieces stay in temporal order; the reassembled signal is clipped or
    zero-padded on the right back to the input length.
    """
    x = np.asarray(x, dtype=np.float64)
    if m < 2 or m > x.size:
        raise InvalidParameterError(f"piece count {m} not in [2, {x.size}]")
    if k < 1:
        raise InvalidParameterError(f"stretch factor must be >= 1, got {k}")
    bounds = _split_points(x.size, m)
    stretched = set(_as_rng(rng).choice(m, size=m // 2, replace=False).tolist())
    pieces = [
        _warp_piece(x[bounds[i] : bounds[i + 1]], k if i in stretched else 1.0 / k)
        for i in range(m)
    ]
    y = np.concatenate(pieces)
    if y.size >= x.size:
        return y[: x.size]
    return np.pad(y, (0, x.size - y.size))


def apply(x: np.ndarray, transform_id: int, spec: TransformSpec, rng=None) -> np.ndarray:
    """Dispatch a transformation by id using parameters from ``spec``.

    ``rng`` defaults to a fresh generator seeded with ``spec.rng_seed``;
    callers producing datasets pass per-segment derived streams instead.
    """
    tid = TransformId(transform_id)
    if rng is None:
        rng = np.random.default_rng(spec.rng_seed)
    if tid == TransformId.ORIGINAL:
        return np.asarray(x, dtype=np.float64).copy()
    if tid == TransformId.NOISE:
        return add_noise(x, spec.snr_db, rng)
    if tid == TransformId.SCALE:
        return scale(x, spec.scale_factor)
    if tid == TransformId.NEGATE:
        return negate(x)
    if tid == TransformId.INVERT_TIME:
        return invert_time(x)
    if tid == TransformId.PERMUTE:
        return permute(x, spec.permutation_segments, rng)
    return time_warp(x, spec.timewarp_segments, spec.stretch_factor, rng)

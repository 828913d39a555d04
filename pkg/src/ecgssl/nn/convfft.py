"""Same-padded 1D cross-correlation kernels.

Two interchangeable implementations sit behind ``conv1d_same``: a direct
im2col product for small problems and an FFT path for the network-sized
ones.  The FFT path does the heavy lifting as batched complex GEMMs over
rfft spectra; kernel spectra and the inverse-DFT crop are computed with
small dense DFT matrices instead of per-kernel FFTs, which is much cheaper
when ``C_in * C_out`` is large.  Path selection depends only on shapes, so
a fixed configuration always computes bit-identical results.

Convention: ``y[t, o] = sum_k sum_i x[t + k - pad_left, i] * w[k, i, o]``
with ``pad_left = (K-1)//2`` and zeros outside the input, so the output
length equals the input length and even kernels pad one extra zero on the
right.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import irfft, next_fast_len, rfft

__all__ = ["pad_amounts", "conv_forward", "conv_backward"]

# Below this many multiply-accumulates the direct path wins (no FFT setup,
# no spectra transposes).  Shapes from gradient-check tests land here.
_DIRECT_MAC_LIMIT = 4_000_000

# Caches keyed by exact shape parameters; contents are deterministic.
_FORWARD_DFT: dict[tuple[int, int], np.ndarray] = {}
_INVERSE_DFT: dict[tuple[int, int], np.ndarray] = {}
_PHASE: dict[tuple[int, int], np.ndarray] = {}


def pad_amounts(kernel: int) -> tuple[int, int]:
    left = (kernel - 1) // 2
    return left, kernel - 1 - left


def _forward_dft(n_fft: int, k: int) -> np.ndarray:
    # E[f, j] = exp(-2πi f j / N); multiplying a length-K kernel by E
    # yields its zero-padded rfft spectrum.
    key = (n_fft, k)
    if key not in _FORWARD_DFT:
        f = np.arange(n_fft // 2 + 1)[:, None]
        j = np.arange(k)[None, :]
        _FORWARD_DFT[key] = np.exp(-2j * np.pi * f * j / n_fft)
    return _FORWARD_DFT[key]


def _inverse_dft(n_fft: int, k: int) -> np.ndarray:
    # D[f, j] recovers the first K real samples from an rfft spectrum:
    # x[j] = (1/N) Re(sum_f weight_f G[f] exp(+2πi f j / N)).
    key = (n_fft, k)
    if key not in _INVERSE_DFT:
        n_bins = n_fft // 2 + 1
        f = np.arange(n_bins)[:, None]
        j = np.arange(k)[None, :]
        weights = np.full(n_bins, 2.0)
        weights[0] = 1.0
        if n_fft % 2 == 0:
            weights[-1] = 1.0
        _INVERSE_DFT[key] = weights[:, None] * np.exp(2j * np.pi * f * j / n_fft) / n_fft
    return _INVERSE_DFT[key]


def _phase(n_fft: int, shift: int) -> np.ndarray:
    # Spectrum of a sequence delayed by `shift` samples.
    key = (n_fft, shift)
    if key not in _PHASE:
        f = np.arange(n_fft // 2 + 1)
        _PHASE[key] = np.exp(-2j * np.pi * f * shift / n_fft)
    return _PHASE[key]


def _use_direct(b: int, length: int, k: int, c_in: int, c_out: int) -> bool:
    return b * length * k * c_in * c_out <= _DIRECT_MAC_LIMIT


def _corr_spectra(xh: np.ndarray, wh: np.ndarray, n_fft: int, offset: int, length: int) -> np.ndarray:
    # xh: (B, F, Ci), wh: (F, Ci, Co) -> time-domain (B, length, Co),
    # reading the linear-convolution result starting at `offset`.
    yh = np.matmul(xh.transpose(1, 0, 2), wh)  # (F, B, Co)
    y = irfft(np.ascontiguousarray(yh.transpose(1, 0, 2)), n=n_fft, axis=1)
    return y[:, offset : offset + length, :]


def conv_forward(x: np.ndarray, w: np.ndarray):
    """Correlate ``x (B, L, Ci)`` with ``w (K, Ci, Co)``; returns (y, ctx)."""
    b, length, c_in = x.shape
    k, _, c_out = w.shape
    pl, pr = pad_amounts(k)

    if _use_direct(b, length, k, c_in, c_out):
        xp = np.pad(x, ((0, 0), (pl, pr), (0, 0)))
        windows = sliding_window_view(xp, k, axis=1)  # (B, L, Ci, K)
        y = np.einsum("btik,kio->bto", windows, w, optimize=True)
        return y, ("direct", x)

    n_fft = next_fast_len(length + k - 1)
    xh = rfft(x, n=n_fft, axis=1)  # (B, F, Ci)
    # Flipped kernel spectra turn the FFT convolution into a correlation.
    wh = np.tensordot(_forward_dft(n_fft, k), w[::-1], axes=(1, 0))  # (F, Ci, Co)
    y = _corr_spectra(xh, wh, n_fft, pr, length)
    return y, ("fft", x, xh, n_fft)


def conv_backward(ctx, w: np.ndarray, dy: np.ndarray):
    """Gradients of ``conv_forward``: returns (dx, dw)."""
    k, c_in, c_out = w.shape
    pl, pr = pad_amounts(k)

    if ctx[0] == "direct":
        _, x = ctx
        b, length, _ = x.shape
        xp = np.pad(x, ((0, 0), (pl, pr), (0, 0)))
        windows = sliding_window_view(xp, k, axis=1)
        dw = np.einsum("btik,bto->kio", windows, dy, optimize=True)
        # dx[s, i] = sum_{k, o} dy[s + pl - k, o] w[k, i, o]
        dyp = np.pad(dy, ((0, 0), (pr, pl), (0, 0)))
        dy_windows = sliding_window_view(dyp, k, axis=1)  # (B, L, Co, K)
        dx = np.einsum("btok,kio->bti", dy_windows, w[::-1], optimize=True)
        return dx, dw

    _, x, xh, n_fft = ctx
    b, length, _ = x.shape
    dyh = rfft(dy, n=n_fft, axis=1)  # (B, F, Co), dy at offset 0

    # dx[s, i] = sum_{j, o} dy[s + pl - j, o] w[j, i, o]: a convolution of
    # dy with the io-transposed kernel, read starting at offset pl.
    wh_t = np.tensordot(_forward_dft(n_fft, k), w.transpose(0, 2, 1), axes=(1, 0))  # (F, Co, Ci)
    dx = _corr_spectra(dyh, wh_t, n_fft, pl, length)

    # dw[k] = sum_{b, t} x_padded[b, t + k, i] dy[b, t, o]: a circular
    # correlation evaluated at lags 0..K-1, done as one batched GEMM per
    # frequency followed by an inverse-DFT crop.
    xh_shifted = xh * _phase(n_fft, pl)[None, :, None]
    g = np.matmul(xh_shifted.transpose(1, 2, 0), np.conj(dyh).transpose(1, 0, 2))  # (F, Ci, Co)
    dw = np.real(np.tensordot(_inverse_dft(n_fft, k), g, axes=(0, 0)))  # (K, Ci, Co)
    return dx, dw

"""Reverse-mode automatic differentiation over dense float64 arrays.

A :class:`Tensor` wraps a numpy array plus an optional gradient buffer.
Operations record a tape node (parents + a backward closure) only when a
gradient can flow to some leaf, so inference through frozen layers builds
no graph at all.  ``Tensor.backward`` walks the recorded graph in reverse
topological order.  Everything is float64 and deterministic for a fixed
thread configuration.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidParameterError, ShapeError, StateError
from . import convfft

__all__ = [
    "Tensor",
    "tensor",
    "add",
    "matmul",
    "relu",
    "sigmoid",
    "softmax",
    "dropout",
    "conv1d_same",
    "maxpool1d",
    "global_maxpool",
    "dense",
    "mean",
    "bce_loss",
    "ce_loss",
    "l2_penalty",
    "weighted_total_loss",
]

_EPS_CLAMP = 1e-12


class Tensor:
    """Dense float64 array with an optional gradient of the same shape."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward_fn", "name")

    def __init__(self, data, requires_grad: bool = False, name: str | None = None):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        self.data = arr
        self.grad: np.ndarray | None = None
        self.requires_grad = bool(requires_grad)
        self._parents: tuple[Tensor, ...] = ()
        self._backward_fn = None
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def __repr__(self) -> str:
        tag = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.data.shape}{tag}, requires_grad={self.requires_grad})"

    def zero_grad(self) -> None:
        self.grad = None

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = g.copy() if isinstance(g, np.ndarray) else np.asarray(g, dtype=np.float64)
        else:
            self.grad += g

    def backward(self) -> None:
        """Backpropagate from this (scalar) tensor through the recorded graph."""
        if self._backward_fn is None and not self._parents:
            raise StateError("backward() called on a tensor with no recorded forward graph")
        if self.data.size != 1:
            raise StateError("backward() requires a scalar loss tensor")

        order: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))

        self.grad = np.ones_like(self.data)
        for node in reversed(order):
            if node._backward_fn is not None and node.grad is not None:
                node._backward_fn(node.grad)


def tensor(data, requires_grad: bool = False, name: str | None = None) -> Tensor:
    return Tensor(data, requires_grad=requires_grad, name=name)


def _needs_graph(*tensors: Tensor) -> bool:
    return any(t.requires_grad or t._parents for t in tensors)


def _attach(out: Tensor, parents: tuple[Tensor, ...], backward_fn) -> Tensor:
    out._parents = parents
    out._backward_fn = backward_fn
    return out


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    # Reduce a gradient back to the shape of a broadcast operand.
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def add(a: Tensor, b: Tensor) -> Tensor:
    out = Tensor(a.data + b.data)
    if not _needs_graph(a, b):
        return out

    def backward(g):
        a._accumulate(_unbroadcast(g, a.data.shape))
        b._accumulate(_unbroadcast(g, b.data.shape))

    return _attach(out, (a, b), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.shape[-1] != b.data.shape[0]:
        raise ShapeError(f"matmul: inner dimensions {a.data.shape} @ {b.data.shape}")
    out = Tensor(a.data @ b.data)
    if not _needs_graph(a, b):
        return out

    def backward(g):
        a._accumulate(g @ b.data.T)
        b._accumulate(a.data.reshape(-1, a.data.shape[-1]).T @ g.reshape(-1, g.shape[-1]))

    return _attach(out, (a, b), backward)


def dense(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """Affine map ``x @ w + b`` for ``x (B, In)``, ``w (In, Out)``, ``b (Out,)``."""
    if x.data.ndim != 2 or w.data.ndim != 2 or x.data.shape[1] != w.data.shape[0]:
        raise ShapeError(f"dense: incompatible shapes {x.data.shape} and {w.data.shape}")
    if b.data.shape != (w.data.shape[1],):
        raise ShapeError(f"dense: bias shape {b.data.shape} != ({w.data.shape[1]},)")
    out = Tensor(x.data @ w.data + b.data)
    if not _needs_graph(x, w, b):
        return out

    def backward(g):
        x._accumulate(g @ w.data.T)
        w._accumulate(x.data.T @ g)
        b._accumulate(g.sum(axis=0))

    return _attach(out, (x, w, b), backward)


def relu(x: Tensor) -> Tensor:
    out = Tensor(np.maximum(x.data, 0.0))
    if not _needs_graph(x):
        return out

    def backward(g):
        x._accumulate(np.where(x.data > 0.0, g, 0.0))

    return _attach(out, (x,), backward)


def sigmoid(x: Tensor) -> Tensor:
    # Stable piecewise form avoids overflow for large |x|.
    d = x.data
    y = np.where(d >= 0, 1.0 / (1.0 + np.exp(-np.abs(d))), np.exp(-np.abs(d)) / (1.0 + np.exp(-np.abs(d))))
    out = Tensor(y)
    if not _needs_graph(x):
        return out

    def backward(g):
        x._accumulate(g * y * (1.0 - y))

    return _attach(out, (x,), backward)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    y = e / e.sum(axis=axis, keepdims=True)
    out = Tensor(y)
    if not _needs_graph(x):
        return out

    def backward(g):
        dot = (g * y).sum(axis=axis, keepdims=True)
        x._accumulate(y * (g - dot))

    return _attach(out, (x,), backward)


def dropout(x: Tensor, rate: float, rng: np.random.Generator, training: bool) -> Tensor:
    """Inverted dropout: kept activations are scaled by 1/(1-rate)."""
    if not 0.0 <= rate < 1.0:
        raise InvalidParameterError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        out = Tensor(x.data)
        if not _needs_graph(x):
            return out

        def backward_id(g):
            x._accumulate(g)

        return _attach(out, (x,), backward_id)

    keep = rng.random(x.data.shape) >= rate
    scale = keep / (1.0 - rate)
    out = Tensor(x.data * scale)
    if not _needs_graph(x):
        return out

    def backward(g):
        x._accumulate(g * scale)

    return _attach(out, (x,), backward)


def _as_batched(x: Tensor) -> tuple[np.ndarray, bool]:
    if x.data.ndim == 2:
        return x.data[None, :, :], True
    if x.data.ndim == 3:
        return x.data, False
    raise ShapeError(f"expected (L, C) or (B, L, C), got {x.data.shape}")


def conv1d_same(x: Tensor, w: Tensor, b: Tensor) -> Tensor:
    """Same-padded stride-1 cross-correlation.

    ``x`` is ``(L, C_in)`` or ``(B, L, C_in)``; ``w`` is ``(K, C_in, C_out)``;
    ``b`` is ``(C_out,)``.  Output length equals input length; even kernels
    place the extra padding zero on the right.
    """
    xd, squeezed = _as_batched(x)
    if w.data.ndim != 3:
        raise ShapeError(f"conv kernel must be (K, C_in, C_out), got {w.data.shape}")
    k, c_in, c_out = w.data.shape
    if xd.shape[2] != c_in:
        raise ShapeError(f"conv: input has {xd.shape[2]} channels, kernel expects {c_in}")
    if b.data.shape != (c_out,):
        raise ShapeError(f"conv: bias shape {b.data.shape} != ({c_out},)")

    y, ctx = convfft.conv_forward(xd, w.data)
    y += b.data
    out = Tensor(y[0] if squeezed else y)
    if not _needs_graph(x, w, b):
        return out

    def backward(g):
        gd = g[None, :, :] if squeezed else g
        dx, dw = convfft.conv_backward(ctx, w.data, gd)
        x._accumulate(dx[0] if squeezed else dx)
        w._accumulate(dw)
        b._accumulate(gd.sum(axis=(0, 1)))

    return _attach(out, (x, w, b), backward)


def maxpool1d(x: Tensor, size: int = 8, stride: int = 2) -> Tensor:
    """Per-channel window max; gradient routes to the first maximal index."""
    xd, squeezed = _as_batched(x)
    b, length, c = xd.shape
    if length < size:
        raise ShapeError(f"maxpool: input length {length} shorter than window {size}")
    out_len = (length - size) // stride + 1
    span = (out_len - 1) * stride + 1

    m = xd[:, 0:span:stride, :].copy()
    for k in range(1, size):
        np.maximum(m, xd[:, k : k + span : stride, :], out=m)
    out = Tensor(m[0] if squeezed else m)
    if not _needs_graph(x):
        return out

    def backward(g):
        gd = g[None, :, :] if squeezed else g
        gx = np.zeros_like(xd)
        unused = np.ones(m.shape, dtype=bool)
        for k in range(size):
            window = xd[:, k : k + span : stride, :]
            hit = unused & (window == m)
            gx[:, k : k + span : stride, :] += np.where(hit, gd, 0.0)
            unused &= ~hit
        x._accumulate(gx[0] if squeezed else gx)

    return _attach(out, (x,), backward)


def global_maxpool(x: Tensor) -> Tensor:
    """Maximum over the time axis: ``(B, L, C) -> (B, C)``."""
    xd, squeezed = _as_batched(x)
    am = xd.argmax(axis=1)  # first maximal index per (b, c)
    m = np.take_along_axis(xd, am[:, None, :], axis=1)[:, 0, :]
    out = Tensor(m[0] if squeezed else m)
    if not _needs_graph(x):
        return out

    def backward(g):
        gd = g[None, :] if squeezed else g
        gx = np.zeros_like(xd)
        np.put_along_axis(gx, am[:, None, :], gd[:, None, :], axis=1)
        x._accumulate(gx[0] if squeezed else gx)

    return _attach(out, (x,), backward)


def mean(x: Tensor) -> Tensor:
    out = Tensor(np.array(x.data.mean()))
    if not _needs_graph(x):
        return out

    def backward(g):
        x._accumulate(np.full_like(x.data, float(g) / x.data.size))

    return _attach(out, (x,), backward)


def bce_loss(psi: Tensor, targets: np.ndarray) -> Tensor:
    """Mean binary cross-entropy, probabilities clamped to [1e-12, 1-1e-12].

    Implements the minimized (negated) form
    ``-mean(p log psi + (1-p) log(1-psi))``.
    """
    p = np.asarray(targets, dtype=np.float64)
    if p.shape != psi.data.shape:
        raise ShapeError(f"bce: target shape {p.shape} != prediction shape {psi.data.shape}")
    clipped = np.clip(psi.data, _EPS_CLAMP, 1.0 - _EPS_CLAMP)
    value = -(p * np.log(clipped) + (1.0 - p) * np.log1p(-clipped)).mean()
    out = Tensor(np.array(value))
    if not _needs_graph(psi):
        return out

    inside = (psi.data > _EPS_CLAMP) & (psi.data < 1.0 - _EPS_CLAMP)

    def backward(g):
        grad = (clipped - p) / (clipped * (1.0 - clipped)) / p.size
        psi._accumulate(float(g) * np.where(inside, grad, 0.0))

    return _attach(out, (psi,), backward)


def ce_loss(rho: Tensor, labels: np.ndarray) -> Tensor:
    """Mean categorical cross-entropy ``-mean(log rho[label])`` over the batch.

    ``rho`` is ``(B, M)`` of class probabilities, ``labels`` integer classes.
    """
    if rho.data.ndim != 2:
        raise ShapeError(f"ce: expected (B, M) probabilities, got {rho.data.shape}")
    y = np.asarray(labels)
    if y.ndim == 2:  # accept one-hot
        y = y.argmax(axis=1)
    if y.shape[0] != rho.data.shape[0]:
        raise ShapeError("ce: batch size mismatch between labels and probabilities")
    if y.min() < 0 or y.max() >= rho.data.shape[1]:
        raise ShapeError(f"ce: label outside [0, {rho.data.shape[1]})")
    b = rho.data.shape[0]
    picked = rho.data[np.arange(b), y]
    clipped = np.clip(picked, _EPS_CLAMP, 1.0)
    out = Tensor(np.array(-np.log(clipped).mean()))
    if not _needs_graph(rho):
        return out

    inside = picked > _EPS_CLAMP

    def backward(g):
        grad = np.zeros_like(rho.data)
        grad[np.arange(b), y] = np.where(inside, -1.0 / clipped, 0.0) / b
        rho._accumulate(float(g) * grad)

    return _attach(out, (rho,), backward)


def l2_penalty(weights: list[Tensor], coeff: float) -> Tensor:
    """``coeff * sum(w**2)`` over the given tensors; gradient ``2*coeff*w``."""
    value = coeff * sum(float(np.sum(w.data * w.data)) for w in weights)
    out = Tensor(np.array(value))
    live = [w for w in weights if w.requires_grad or w._parents]
    if not live:
        return out

    def backward(g):
        for w in live:
            w._accumulate((2.0 * coeff * float(g)) * w.data)

    return _attach(out, tuple(live), backward)


def weighted_total_loss(per_task: list[Tensor], alpha) -> Tensor:
    """Weighted sum of scalar losses: ``sum_j alpha[j] * loss[j]``."""
    a = np.asarray(alpha, dtype=np.float64)
    if a.ndim != 1 or len(per_task) != a.size:
        raise ShapeError(f"{len(per_task)} losses but {a.size} coefficients")
    value = sum(float(a[j]) * float(t.data) for j, t in enumerate(per_task))
    out = Tensor(np.array(value))
    live = [(j, t) for j, t in enumerate(per_task) if t.requires_grad or t._parents]
    if not live:
        return out

    def backward(g):
        for j, t in live:
            t._accumulate(np.asarray(float(g) * a[j]))

    return _attach(out, tuple(t for _, t in live), backward)

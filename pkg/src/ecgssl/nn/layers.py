"""Layer parameter containers and seeded weight initialization.

He-uniform init for ReLU-followed layers, Glorot-uniform for sigmoid and
softmax output layers.  A layer whose ``trainable`` flag is off is skipped
by the optimizer and receives no gradient buffers.
"""

from __future__ import annotations

import numpy as np

from .autograd import Tensor, conv1d_same, dense

__all__ = ["Conv1d", "Dense", "he_uniform", "glorot_uniform"]


def he_uniform(shape: tuple[int, ...], fan_in: int, rng: np.random.Generator) -> np.ndarray:
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


def glorot_uniform(shape: tuple[int, ...], fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Conv1d:
    """Same-padded stride-1 convolution layer, kernel ``(K, C_in, C_out)``."""

    def __init__(self, kernel: int, c_in: int, c_out: int, rng: np.random.Generator,
                 name: str = "conv", trainable: bool = True):
        w = he_uniform((kernel, c_in, c_out), fan_in=kernel * c_in, rng=rng)
        self.weights = Tensor(w, requires_grad=trainable, name=f"{name}/w")
        self.bias = Tensor(np.zeros(c_out), requires_grad=trainable, name=f"{name}/b")
        self.name = name

    @property
    def trainable(self) -> bool:
        return self.weights.requires_grad

    @trainable.setter
    def trainable(self, flag: bool) -> None:
        self.weights.requires_grad = flag
        self.bias.requires_grad = flag

    def __call__(self, x: Tensor) -> Tensor:
        return conv1d_same(x, self.weights, self.bias)

    def params(self) -> list[Tensor]:
        return [self.weights, self.bias]


class Dense:
    """Fully connected layer ``(In, Out)``; init matches the activation after it."""

    def __init__(self, n_in: int, n_out: int, rng: np.random.Generator,
                 activation: str = "relu", name: str = "dense", trainable: bool = True):
        if activation == "relu":
            w = he_uniform((n_in, n_out), fan_in=n_in, rng=rng)
        else:  # sigmoid / softmax outputs
            w = glorot_uniform((n_in, n_out), fan_in=n_in, fan_out=n_out, rng=rng)
        self.weights = Tensor(w, requires_grad=trainable, name=f"{name}/w")
        self.bias = Tensor(np.zeros(n_out), requires_grad=trainable, name=f"{name}/b")
        self.name = name

    @property
    def trainable(self) -> bool:
        return self.weights.requires_grad

    @trainable.setter
    def trainable(self, flag: bool) -> None:
        self.weights.requires_grad = flag
        self.bias.requires_grad = flag

    def __call__(self, x: Tensor) -> Tensor:
        return dense(x, self.weights, self.bias)

    def params(self) -> list[Tensor]:
        return [self.weights, self.bias]

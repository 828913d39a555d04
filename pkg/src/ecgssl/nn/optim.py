"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np

from .autograd import Tensor

__all__ = ["adam_step", "Adam"]


def adam_step(param: np.ndarray, grad: np.ndarray, state: dict, lr: float = 0.001,
              beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> None:
    """One in-place Adam update for a single parameter array.

    ``state`` holds the running moments ("m", "v") and step count ("t");
    an empty dict is initialized on first use.
    """
    if "m" not in state:
        state["m"] = np.zeros_like(param)
        state["v"] = np.zeros_like(param)
        state["t"] = 0
    state["t"] += 1
    t = state["t"]
    m, v = state["m"], state["v"]
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * (grad * grad)
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    param -= lr * m_hat / (np.sqrt(v_hat) + eps)


class Adam:
    """Tracks moments for a fixed list of trainable tensors.

    Tensors whose ``requires_grad`` flag is off are refused up front:
    frozen layers must not accumulate state or updates.
    """

    def __init__(self, params: list[Tensor], lr: float = 0.001,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = [p for p in params if p.requires_grad]
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._state: list[dict] = [{} for _ in self.params]

    def step(self) -> None:
        for p, state in zip(self.params, self._state):
            if p.grad is None:
                continue
            adam_step(p.data, p.grad, state, self.lr, self.beta1, self.beta2, self.eps)

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None

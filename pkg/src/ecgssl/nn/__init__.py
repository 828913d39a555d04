"""Minimal deterministic neural-network kernel on numpy float64."""

from .autograd import (
    Tensor,
    add,
    bce_loss,
    ce_loss,
    conv1d_same,
    dense,
    dropout,
    global_maxpool,
    l2_penalty,
    matmul,
    maxpool1d,
    mean,
    relu,
    sigmoid,
    softmax,
    tensor,
    weighted_total_loss,
)
from .checkpoint import CheckpointEntry, load_checkpoint, save_checkpoint
from .layers import Conv1d, Dense, glorot_uniform, he_uniform
from .optim import Adam, adam_step

__all__ = [
    "Tensor",
    "tensor",
    "add",
    "matmul",
    "dense",
    "relu",
    "sigmoid",
    "softmax",
    "dropout",
    "conv1d_same",
    "maxpool1d",
    "global_maxpool",
    "mean",
    "bce_loss",
    "ce_loss",
    "l2_penalty",
    "weighted_total_loss",
    "Conv1d",
    "Dense",
    "he_uniform",
    "glorot_uniform",
    "Adam",
    "adam_step",
    "CheckpointEntry",
    "save_checkpoint",
    "load_checkpoint",
]

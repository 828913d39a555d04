"""Seeded random-stream derivation.

Every random decision in the pipeline (transform noise, shuffles, weight
init, dropout masks) draws from a named sub-stream derived from one master
seed, so runs are reproducible end to end and independent consumers never
share a stream.  Streams are backed by Philox, a counter-based generator,
so a (master seed, name, indices) triple always yields the same sequence
regardless of creation order.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["substream", "spawn_seed"]


def _name_key(name: str) -> int:
    # crc32 is stable across platforms and Python versions.
    return zlib.crc32(name.encode("utf-8"))


def substream(master_seed: int, name: str, *indices: int) -> np.random.Generator:
    """Return a Generator for the sub-stream ``name`` under ``master_seed``.

    Extra integer ``indices`` distinguish parallel uses of the same named
    stream, e.g. ``substream(seed, "transform", segment_index, transform_id)``.
    """
    key = (_name_key(name),) + tuple(int(i) for i in indices)
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=key)
    return np.random.Generator(np.random.Philox(seq))


def spawn_seed(master_seed: int, name: str, *indices: int) -> int:
    """Derive a 63-bit integer seed for handing to a child process or run."""
    gen = substream(master_seed, name, *indices)
    return int(gen.integers(0, 2**63 - 1))

"""Keyed counter-based random streams.

A stream is a Philox generator whose 128-bit key is ``(master seed, hash of
the stream label)``.  Sub-stream ``i`` of a stream starts at counter block
``i * 2**128`` so replicates never overlap and any one of them can be
regenerated without touching the others.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_id(*labels) -> int:
    """Stable 64-bit id for a tuple of labels (independent of PYTHONHASHSEED)."""
    text = "\x1f".join(repr(label) for label in labels).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "little")


def generator(seed: int, stream: int, substream: int = 0) -> np.random.Generator:
    """Generator for ``(seed, stream, substream)``; identical inputs give identical draws."""
    if seed < 0 or stream < 0 or substream < 0:
        raise ValueError("seed, stream and substream must be non-negative")
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, substream & _MASK64, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))

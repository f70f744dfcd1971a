"""Counter-based SplitMix64 generator with Box-Muller normals.

Phantom noise must be bit-reproducible across platforms and numpy versions,
which numpy's ``Generator`` streams do not promise.  The generator here is
fully specified by the code below:

* ``splitmix64(key, i)`` for counter ``i = 0, 1, 2, ...`` is Steele, Lea and
  Flood's SplitMix64 output function applied to ``key + (i + 1) * 0x9E3779B97F4A7C15``
  (all arithmetic mod 2**64);
* a uniform double in the open interval (0, 1) is ``((z >> 11) + 0.5) / 2**53``;
* normal ``j`` is ``sqrt(-2 ln u[2j]) * cos(2 pi u[2j+1])`` (Box-Muller, cosine branch).

Independent streams for one seed are selected by mixing a stream number into
the key.
"""
from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int = 0) -> np.uint64:
    base = np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    salt = np.array([stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return _mix(base ^ _mix(salt * GOLDEN + GOLDEN))[0]


def splitmix64(key: np.uint64, n: int) -> np.ndarray:
    """First ``n`` raw 64-bit outputs for ``key``."""
    counter = np.arange(1, n + 1, dtype=np.uint64)
    return _mix(key + counter * GOLDEN)


def uniform(seed: int, n: int, stream: int = 0) -> np.ndarray:
    z = splitmix64(stream_key(seed, stream), n)
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def normal(seed: int, n: int, stream: int = 0) -> np.ndarray:
    u = uniform(seed, 2 * n, stream)
    return np.sqrt(-2.0 * np.log(u[0::2])) * np.cos(2.0 * np.pi * u[1::2])

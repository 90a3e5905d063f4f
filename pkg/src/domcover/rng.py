"""Counter-based per-vertex randomness.

Every draw is a pure function of ``(seed, tag, index)`` so results do not
depend on evaluation order, vectorisation, or how work is split between
workers.  The mixing function is SplitMix64.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def _mix(z: int) -> int:
    z = (z + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = z + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _tag_key(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


@dataclass(frozen=True)
class RngPolicy:
    """Seeded source of reproducible per-index uniforms in the open interval (0, 1)."""

    seed: int = 0

    def _stream_key(self, tag: str, attempt: int = 0) -> int:
        key = _mix((self.seed & _MASK) ^ _mix(_tag_key(tag)))
        return _mix(key ^ attempt)

    def uniform_at(self, tag: str, index: int, attempt: int = 0) -> float:
        """Scalar draw; equals ``uniform(tag, n)[index]`` for any ``n > index``
        whenever no collision re-roll happened."""
        h = _mix(self._stream_key(tag, attempt) ^ (index & _MASK))
        return ((h >> 11) + 0.5) * _INV53

    def uniform(self, tag: str, n: int, attempt: int = 0) -> np.ndarray:
        """Vector of ``n`` draws for indices ``0..n-1``."""
        idx = np.arange(n, dtype=np.uint64)
        h = _mix_array(idx ^ np.uint64(self._stream_key(tag, attempt)))
        return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53

    def distinct_uniform(self, tag: str, n: int) -> np.ndarray:
        """Like :meth:`uniform` but guarantees pairwise distinct values.

        Colliding indices (other than the first holder of a value) are
        re-drawn from the next attempt stream.
        """
        values = self.uniform(tag, n)
        attempt = 0
        while True:
            _, first = np.unique(values, return_index=True)
            if len(first) == n:
                return values
            attempt += 1
            dup = np.setdiff1d(np.arange(n), first)
            values[dup] = self.uniform(tag, n, attempt)[dup]

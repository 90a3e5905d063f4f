"""Vectorised per-segment selection over :class:`Pools` entries.

Ties on the key are always resolved towards the smaller member id.
"""

from __future__ import annotations

import numpy as np

from .graph import Pools


def _sorted_entries(owner, members, key):
    # primary: owner ascending, then key descending, then member id ascending
    return np.lexsort((members, -key, owner))


def argmax(pools: Pools, key: np.ndarray) -> np.ndarray:
    """For each segment, the member maximising ``key[member]``; -1 if empty."""
    out = np.full(pools.count, -1, dtype=np.int64)
    if not pools.members.size:
        return out
    order = _sorted_entries(pools.owner, pools.members, key[pools.members])
    nonempty = pools.sizes > 0
    out[nonempty] = pools.members[order][pools.offsets[:-1][nonempty]]
    return out


def top_two(pools: Pools, key: np.ndarray, eligible: np.ndarray):
    """Best and second-best eligible members per segment.

    Returns ``(first, second, count)`` where ``count`` is the number of
    eligible members; ``first``/``second`` are -1 where missing.
    """
    keep = eligible[pools.members]
    owner = pools.owner[keep]
    members = pools.members[keep]
    count = np.bincount(owner, minlength=pools.count)
    first = np.full(pools.count, -1, dtype=np.int64)
    second = np.full(pools.count, -1, dtype=np.int64)
    if members.size:
        order = _sorted_entries(owner, members, key[members])
        members = members[order]
        starts = np.zeros(pools.count, dtype=np.int64)
        np.cumsum(count[:-1], out=starts[1:])
        has1 = count >= 1
        has2 = count >= 2
        first[has1] = members[starts[has1]]
        second[has2] = members[starts[has2] + 1]
    return first, second, count


def smallest_in(pools: Pools, chosen: np.ndarray, exclude: np.ndarray | None = None):
    """Smallest member of each segment with ``chosen[member]`` true, skipping
    ``exclude[owner]`` when given; -1 where none."""
    keep = chosen[pools.members]
    if exclude is not None:
        keep &= pools.members != exclude[pools.owner]
    out = np.full(pools.count, -1, dtype=np.int64)
    owners = pools.owner[keep]
    # members are ascending inside each segment, so the first hit is the smallest
    uniq, idx = np.unique(owners, return_index=True)
    out[uniq] = pools.members[keep][idx]
    return out

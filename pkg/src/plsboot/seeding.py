"""Deterministic seed derivation.

Every stochastic routine in the package takes an integer seed and derives
child seeds through :func:`derive_seed` with a path of labels and indices,
e.g. ``derive_seed(root, "eta", 3)`` or ``derive_seed(root, "criterion", r)``.
The derivation is a pure function of (seed, path), so any sub-computation can
be reproduced in isolation and results do not depend on evaluation order.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["derive_seed", "derive_rng", "spawn_key"]


def spawn_key(path: tuple) -> tuple[int, ...]:
    """Map a mixed label/index path to a numpy SeedSequence spawn key."""
    key = []
    for part in path:
        if isinstance(part, str):
            key.append(zlib.crc32(part.encode("utf-8")))
        else:
            part = int(part)
            if part < 0:
                raise ValueError("seed path indices must be non-negative")
            key.append(part)
    return tuple(key)


def derive_seed(seed: int, *path) -> int:
    """Derive a child seed from ``seed`` and a path of labels/indices."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key(path))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_rng(seed: int, *path) -> np.random.Generator:
    """Generator seeded by the derived child seed (root generator if no path)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key(path))
    return np.random.default_rng(ss)

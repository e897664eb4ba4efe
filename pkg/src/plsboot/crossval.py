"""Seeded k-fold assignment shared by the CV-based tuners and metrics."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .seeding import derive_rng

__all__ = ["kfold_indices"]


def kfold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    """Near-equal folds from a seeded random permutation of ``range(n)``.

    The first ``n % folds`` folds receive one extra row.  Deterministic in
    (n, folds, seed) and independent of everything else.
    """
    n, folds = int(n), int(folds)
    if folds < 2:
        raise DimensionMismatch("need at least two folds")
    if folds > n:
        raise DimensionMismatch(f"{folds} folds but only {n} rows")
    perm = derive_rng(seed, "kfold").permutation(n)
    return [np.sort(part) for part in np.array_split(perm, folds)]

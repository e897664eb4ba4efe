"""Pairs bootstrap: resampling plans, replicate collection, BCa intervals.

Whole observation rows (y_i, x_i.) are resampled with replacement.  Each
resampling row of a plan depends only on (seed, replicate index), so
replicates can be generated or evaluated independently and in any order.
Replicates whose statistic evaluation fails are stored as NaN and excluded
from interval construction rather than imputed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import DimensionMismatch, PlsbootError, TooFewReplicates

__all__ = [
    "ResamplePlan",
    "BootstrapDistribution",
    "ConfidenceInterval",
    "resample_pairs",
    "percentile_interval",
    "bca_interval",
    "collect_pairs_statistic",
    "min_finite_required",
]


@dataclass(frozen=True)
class ResamplePlan:
    """R x n matrix of row indices drawn i.i.d. uniform with replacement."""

    indices: np.ndarray
    seed: int

    @property
    def n_boot(self) -> int:
        return self.indices.shape[0]

    @property
    def n(self) -> int:
        return self.indices.shape[1]


@dataclass
class BootstrapDistribution:
    """Replicate values of one scalar statistic plus its original value.

    NaN replicates mark excluded evaluations (failed fits, divergence).
    ``jackknife`` optionally holds the n leave-one-out statistic values used
    for the BCa acceleration constant.
    """

    replicates: np.ndarray
    original: float
    jackknife: np.ndarray | None = None

    def finite(self) -> np.ndarray:
        reps = np.asarray(self.replicates, dtype=float)
        return reps[np.isfinite(reps)]

    @property
    def n_excluded(self) -> int:
        return int(np.size(self.replicates) - self.finite().size)


@dataclass(frozen=True)
class ConfidenceInterval:
    """Two-sided interval with construction metadata.

    ``method`` is "bca" or "percentile"; ``note`` records fallbacks such as
    a fixed zero acceleration or bias-count clamping.
    """

    lo: float
    hi: float
    level: float
    method: str
    z0: float | None = None
    accel: float | None = None
    clamped: bool = False
    note: str = ""

    def contains(self, value: float) -> bool:
        return self.lo <= value <= self.hi

    def excludes_zero(self) -> bool:
        return not self.contains(0.0)


def resample_pairs(n: int, n_boot: int, seed: int) -> ResamplePlan:
    """Plan of ``n_boot`` uniform-with-replacement resamples of ``n`` rows."""
    n = int(n)
    n_boot = int(n_boot)
    if n < 2:
        raise DimensionMismatch("need at least two rows to resample pairs")
    if n_boot < 1:
        raise DimensionMismatch("need at least one replicate")
    indices = np.empty((n_boot, n), dtype=np.int64)
    root = np.random.SeedSequence(entropy=int(seed))
    for r, child in enumerate(root.spawn(n_boot)):
        indices[r] = np.random.default_rng(child).integers(0, n, size=n)
    return ResamplePlan(indices=indices, seed=int(seed))


def min_finite_required(n_boot: int) -> int:
    """Finite-replicate floor for interval construction.

    At least half the replicates and at least 50 of them must be finite;
    for tiny replicate counts the floor is the count itself.
    """
    return min(int(n_boot), max(50, math.ceil(0.5 * n_boot)))


def _finite_or_raise(dist: BootstrapDistribution) -> np.ndarray:
    reps = np.asarray(dist.replicates, dtype=float).ravel()
    finite = reps[np.isfinite(reps)]
    needed = min_finite_required(reps.size)
    if finite.size < needed:
        raise TooFewReplicates(
            f"{finite.size} finite replicates of {reps.size}; need {needed}"
        )
    return finite


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return alpha


def percentile_interval(dist: BootstrapDistribution, alpha: float) -> ConfidenceInterval:
    """Equal-tail percentile interval with linear quantile interpolation."""
    alpha = _check_alpha(alpha)
    finite = _finite_or_raise(dist)
    lo, hi = np.quantile(finite, [alpha / 2.0, 1.0 - alpha / 2.0])
    return ConfidenceInterval(
        lo=float(lo), hi=float(hi), level=1.0 - alpha, method="percentile"
    )


def _acceleration_from_jackknife(jackknife: np.ndarray) -> float | None:
    """Jackknife-skewness acceleration; None when the denominator vanishes."""
    jk = np.asarray(jackknife, dtype=float).ravel()
    d = jk.mean() - jk
    denom = float(np.sum(d * d)) ** 1.5
    if denom == 0.0:
        return None
    return float(np.sum(d**3)) / (6.0 * denom)


def bca_interval(
    dist: BootstrapDistribution,
    alpha: float,
    acceleration: float | None = None,
) -> ConfidenceInterval:
    """Bias-corrected and accelerated interval.

    The bias constant is z0 = Phi^-1(#{replicate < original}/B) with the
    count clamped into [1, B-1] (clamping recorded on the result).  The
    acceleration comes from the jackknife skewness when leave-one-out values
    are available, or from the explicit ``acceleration`` argument; with
    neither, the interval falls back to the percentile construction.  When
    both corrections are exactly zero the percentile levels are used
    unchanged, so the BCa interval equals the percentile interval exactly.
    """
    alpha = _check_alpha(alpha)
    finite = _finite_or_raise(dist)
    b = finite.size

    note = ""
    if acceleration is not None:
        a = float(acceleration)
        if dist.jackknife is None:
            note = "a=fixed"
    elif dist.jackknife is not None:
        a = _acceleration_from_jackknife(dist.jackknife)
        if a is None:
            ci = percentile_interval(dist, alpha)
            return ConfidenceInterval(
                lo=ci.lo, hi=ci.hi, level=ci.level, method="percentile",
                note="fallback: acceleration undefined",
            )
    else:
        ci = percentile_interval(dist, alpha)
        return ConfidenceInterval(
            lo=ci.lo, hi=ci.hi, level=ci.level, method="percentile",
            note="fallback: no jackknife",
        )

    count = int(np.sum(finite < dist.original))
    clamped = count < 1 or count > b - 1
    count = min(max(count, 1), b - 1)
    z0 = float(norm.ppf(count / b))

    if z0 == 0.0 and a == 0.0:
        a1, a2 = alpha / 2.0, 1.0 - alpha / 2.0
    else:
        z_lo = norm.ppf(alpha / 2.0)
        z_hi = norm.ppf(1.0 - alpha / 2.0)
        a1 = float(norm.cdf(z0 + (z0 + z_lo) / (1.0 - a * (z0 + z_lo))))
        a2 = float(norm.cdf(z0 + (z0 + z_hi) / (1.0 - a * (z0 + z_hi))))
    lo, hi = np.quantile(finite, [a1, a2])
    return ConfidenceInterval(
        lo=float(lo),
        hi=float(hi),
        level=1.0 - alpha,
        method="bca",
        z0=z0,
        accel=a,
        clamped=clamped,
        note=note,
    )


def collect_pairs_statistic(statistic, x, y, plan: ResamplePlan) -> np.ndarray:
    """Evaluate ``statistic(x_rows, y_rows)`` on every plan replicate.

    Returns an (R, m) matrix where m is the statistic's output length; rows
    for replicates whose evaluation raised a package error or a linear
    algebra failure are NaN.  Writes are indexed by replicate, so the result
    does not depend on evaluation order.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    values: list[np.ndarray | None] = []
    width = None
    for r in range(plan.n_boot):
        idx = plan.indices[r]
        try:
            value = np.atleast_1d(np.asarray(statistic(x[idx], y[idx]), dtype=float))
        except (PlsbootError, np.linalg.LinAlgError):
            value = None
        if value is not None and width is None:
            width = value.size
        values.append(value)
    out = np.full((plan.n_boot, width if width is not None else 1), np.nan)
    for r, value in enumerate(values):
        if value is None:
            continue
        if value.size != out.shape[1]:
            raise DimensionMismatch("statistic output length changed between replicates")
        out[r] = value
    return out

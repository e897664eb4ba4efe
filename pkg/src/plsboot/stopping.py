"""Component-count selection: bootstrap criterion and Q2 cross-validation.

``bootyt_select_k`` grows the component count while bootstrap confidence
intervals of every component's out-of-bag y-loading exclude zero; a
component that only models resampling noise has a sign-symmetric loading
distribution on held-out rows and stops the growth.  ``q2_select_k`` is the
classical CV baseline: keep component k while Q2_k = 1 - PRESS_k/RSS_{k-1}
stays above a threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._batch import OobLoadingEngine
from .bootstrap import (
    BootstrapDistribution,
    ConfidenceInterval,
    percentile_interval,
    resample_pairs,
)
from .crossval import kfold_indices
from .errors import DegenerateDirection, ZeroVarianceColumn
from .pls import Dataset, pls_weight, standardize
from .seeding import derive_seed

__all__ = ["StoppingConfig", "KSelection", "Q2Selection", "bootyt_select_k", "q2_select_k"]


@dataclass(frozen=True)
class StoppingConfig:
    """Shared settings for the component-count criteria."""

    k_max: int
    n_boot: int = 1000
    alpha: float = 0.05
    folds: int = 10
    q2_threshold: float = 0.0975

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass
class KSelection:
    """Criterion outcome: chosen K plus the full per-probe interval trace."""

    k: int
    trace: list[list[ConfidenceInterval]]
    excluded_per_k: list[int]
    reason: str

    def trace_rows(self):
        """Flat (k, component, lo, hi, excludes_zero) rows for CSV export."""
        rows = []
        for probe, intervals in enumerate(self.trace, start=1):
            for j, ci in enumerate(intervals, start=1):
                rows.append((probe, j, ci.lo, ci.hi, ci.excludes_zero()))
        return rows


@dataclass
class Q2Selection:
    """Q2 outcome: chosen K, per-component Q2 values, forced-floor flag."""

    k: int
    q2: list[float]
    forced_floor: bool
    threshold: float


def _loading_path(data: Dataset, k_cap: int) -> np.ndarray:
    """y-loadings of the full-data fit for k = 1..k_cap (may stop early)."""
    x_res = data.x.copy()
    y_res = data.y.copy()
    loadings = []
    for _ in range(k_cap):
        try:
            w = pls_weight(x_res, y_res)
        except DegenerateDirection:
            break
        t = x_res @ w
        tt = float(t @ t)
        if tt <= 1e-12:
            break
        p_load = x_res.T @ t / tt
        c = float(y_res @ t) / tt
        loadings.append(c)
        x_res -= np.outer(t, p_load)
        y_res -= c * t
    return np.array(loadings)


def bootyt_select_k(data: Dataset, config: StoppingConfig, seed: int) -> KSelection:
    """Bootstrap component-count criterion.

    One resampling plan (derived from ``seed``) is shared by all probes so
    interval traces are comparable across k.  Every probe k re-tests the
    intervals of all k components; growth stops at the first probe where
    any interval covers zero, giving K = probe - 1.  K = 0 means not even
    the first component carries significant out-of-sample loading.
    """
    k_cap = min(config.k_max, data.n - 1, data.p)
    plan = resample_pairs(data.n, config.n_boot, derive_seed(seed, "bootyt-plan"))
    engine = OobLoadingEngine(
        data.original_x(), data.original_y(), plan.indices, data.scaled
    )
    original = _loading_path(data, k_cap)

    trace: list[list[ConfidenceInterval]] = []
    excluded: list[int] = []
    intervals: list[ConfidenceInterval] = []
    for k in range(1, k_cap + 1):
        if k > original.size:
            return KSelection(k - 1, trace, excluded, "rank limit")
        column = engine.extend()
        dist = BootstrapDistribution(column, float(original[k - 1]))
        excluded.append(dist.n_excluded)
        intervals.append(percentile_interval(dist, config.alpha))
        trace.append(list(intervals))
        if not all(ci.excludes_zero() for ci in intervals):
            return KSelection(k - 1, trace, excluded, "loading interval covers zero")
    return KSelection(k_cap, trace, excluded, "component cap reached")


def _prediction_path(train_x, train_y, test_x, k_cap: int, scale: bool) -> np.ndarray:
    """Out-of-fold predictions for k = 1..k_reached (columns)."""
    try:
        train = standardize(train_x, train_y, scale=scale)
    except ZeroVarianceColumn:
        return np.empty((test_x.shape[0], 0))
    x_res = train.x.copy()
    y_res = train.y.copy()
    rotation = np.zeros((train.p, 0))
    x_loadings = np.zeros((train.p, 0))
    beta_centered = np.zeros(train.p)
    x_test = (test_x - train.column_means) / train.column_sds
    cols = []
    for _ in range(min(k_cap, train.n - 1, train.p)):
        try:
            w = pls_weight(x_res, y_res)
        except DegenerateDirection:
            break
        t = x_res @ w
        tt = float(t @ t)
        if tt <= 1e-12:
            break
        p_load = x_res.T @ t / tt
        c = float(y_res @ t) / tt
        r = w - rotation @ (x_loadings.T @ w)
        beta_centered = beta_centered + c * r
        rotation = np.column_stack([rotation, r])
        x_loadings = np.column_stack([x_loadings, p_load])
        x_res -= np.outer(t, p_load)
        y_res -= c * t
        cols.append(train.y_mean + x_test @ beta_centered)
    if not cols:
        return np.empty((test_x.shape[0], 0))
    return np.column_stack(cols)


def q2_select_k(data: Dataset, config: StoppingConfig, seed: int) -> Q2Selection:
    """Q2 cross-validation criterion with a forced floor of one component.

    Q2_k = 1 - PRESS_k / RSS_{k-1}; component k is retained while Q2_k is
    at or above ``config.q2_threshold``.  The first component is always
    kept; ``forced_floor`` records when its Q2 was actually below the
    threshold.
    """
    folds = kfold_indices(data.n, config.folds, derive_seed(seed, "q2-folds"))
    x_raw = data.original_x()
    y_raw = data.original_y()
    k_cap = min(config.k_max, data.n - 1, data.p)

    press_parts = []
    for test_rows in folds:
        train_rows = np.setdiff1d(np.arange(data.n), test_rows)
        preds = _prediction_path(
            x_raw[train_rows], y_raw[train_rows], x_raw[test_rows], k_cap, data.scaled
        )
        press_parts.append((test_rows, preds))
    k_cap = min([k_cap] + [preds.shape[1] for _, preds in press_parts])

    press = np.zeros(k_cap)
    for test_rows, preds in press_parts:
        err = y_raw[test_rows, None] - preds[:, :k_cap]
        press += np.sum(err * err, axis=0)

    full_preds = _prediction_path(x_raw, y_raw, x_raw, k_cap, data.scaled)
    k_cap = min(k_cap, full_preds.shape[1])
    rss = [float(np.sum(data.y**2))]
    for k in range(k_cap):
        resid = y_raw - full_preds[:, k]
        rss.append(float(resid @ resid))

    q2 = []
    for k in range(k_cap):
        if rss[k] <= 0.0:  # earlier fit already perfect
            break
        q2.append(1.0 - press[k] / rss[k])

    k = 0
    while k < len(q2) and q2[k] >= config.q2_threshold:
        k += 1
    forced = k == 0
    return Q2Selection(k=max(k, 1), q2=q2, forced_floor=forced,
                       threshold=config.q2_threshold)

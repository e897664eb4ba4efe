"""Sparse PLS: thresholded direction vectors, active-set fits, and tuning.

The sparse direction solves the L1-constrained covariance maximisation in
closed form: component-wise soft thresholding of the cross-covariance vector
at a fraction ``eta`` of its largest absolute entry, followed by
normalisation.  Model fitting alternates sparse directions on the response
residual with an ordinary PLS refit on the accumulated active set.

Two tuners select (eta, K): ``tune_cv`` scans the full eta x K grid by
k-fold cross-validation; ``tune_bootyt`` grows K per eta while bootstrap
BCa intervals of all y-loadings exclude zero, then compares the one
surviving model per eta by CV.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bootstrap import (
    BootstrapDistribution,
    ConfidenceInterval,
    percentile_interval,
    resample_pairs,
)
from .crossval import kfold_indices
from .errors import (
    DegenerateDirection,
    NoValidEta,
    PlsbootError,
    TooFewReplicates,
    TooManyComponents,
)
from .pls import Dataset, PlsFit, component_loadings_on, pls_fit, standardize
from .seeding import derive_seed

__all__ = [
    "SparsityConfig",
    "SparseFit",
    "CvCell",
    "CvTuning",
    "BootTuning",
    "sparse_weight",
    "spls_fit",
    "predict_sparse",
    "tune_cv",
    "tune_bootyt",
]


@dataclass(frozen=True)
class SparsityConfig:
    """Grid of sparsity values, component cap, and CV fold count."""

    eta_grid: tuple[float, ...]
    k_max: int
    folds: int = 10

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eta_grid)
        if not grid:
            raise ValueError("eta grid must be nonempty")
        if any(not 0.0 <= e < 1.0 for e in grid):
            raise ValueError("every eta must lie in [0, 1)")
        if list(grid) != sorted(grid):
            raise ValueError("eta grid must be ascending")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        object.__setattr__(self, "eta_grid", grid)


@dataclass
class SparseFit:
    """Sparse PLS model: active predictors plus an ordinary fit on them."""

    active: np.ndarray
    inner: PlsFit
    eta: float
    n_components: int
    beta: np.ndarray
    intercept: float


@dataclass(frozen=True)
class CvCell:
    eta: float
    n_components: int
    mse: float
    failed_folds: int = 0


@dataclass
class CvTuning:
    eta: float
    n_components: int
    table: list[CvCell]


@dataclass
class BootTuning:
    eta: float
    n_components: int
    k_per_eta: dict[float, int]
    dropped: dict[float, str]
    cv_table: list[CvCell]
    trace: list[tuple[float, int, list[ConfidenceInterval]]] = field(default_factory=list)

    @property
    def n_ci_tests(self) -> int:
        return sum(len(cis) for _, _, cis in self.trace)


def sparse_weight(z, eta: float) -> np.ndarray:
    """Unit-norm sparse direction from cross-covariance vector ``z``.

    Entries with |z_j| <= eta * max|z| are zeroed; survivors are soft
    thresholded and the result normalised.  ``eta = 0`` reproduces the dense
    PLS direction.
    """
    z = np.asarray(z, dtype=float).ravel()
    eta = float(eta)
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    top = float(np.max(np.abs(z)))
    if top == 0.0:
        raise DegenerateDirection("cross-covariance vector is zero")
    shrunk = np.sign(z) * np.maximum(np.abs(z) - eta * top, 0.0)
    return shrunk / np.linalg.norm(shrunk)


def _spls_path(data: Dataset, eta: float, k_max: int):
    """Active sets and inner fits for k = 1..k_max (truncates on rank limits).

    Returns (path, failure) where path[k-1] = (active, inner fit with k
    components) and failure is the exception that stopped the path early,
    or None.
    """
    active = np.array([], dtype=int)
    y_res = data.y.copy()
    path: list[tuple[np.ndarray, PlsFit]] = []
    for k in range(1, int(k_max) + 1):
        z = data.x.T @ y_res
        try:
            w = sparse_weight(z, eta)
        except DegenerateDirection:
            return path, TooManyComponents(
                f"response residual exhausted at component {k}"
            )
        active = np.union1d(active, np.flatnonzero(w != 0.0))
        try:
            inner = pls_fit(data.subset(active), k)
        except TooManyComponents as exc:
            return path, exc
        y_res = data.y - data.x[:, active] @ inner.beta_centered
        path.append((active, inner))
    return path, None


def spls_fit(data: Dataset, eta: float, n_components: int) -> SparseFit:
    """Sparse PLS fit with exactly ``n_components`` components."""
    k = int(n_components)
    path, failure = _spls_path(data, eta, k)
    if len(path) < k:
        raise failure if failure is not None else TooManyComponents(
            f"path stopped before component {k}"
        )
    active, inner = path[-1]
    beta = np.zeros(data.p)
    beta[active] = inner.beta
    return SparseFit(
        active=active,
        inner=inner,
        eta=float(eta),
        n_components=k,
        beta=beta,
        intercept=inner.intercept,
    )


def predict_sparse(fit: SparseFit, x_new) -> np.ndarray:
    """Predicted response for raw predictor rows (all p columns)."""
    x_new = np.atleast_2d(np.asarray(x_new, dtype=float))
    return fit.intercept + x_new @ fit.beta


def _best_cell(cells: list[CvCell]) -> CvCell:
    """Lowest MSE; ties broken by smaller K, then smaller eta, then order."""
    finite = [(c.mse, c.n_components, c.eta, i) for i, c in enumerate(cells)
              if np.isfinite(c.mse)]
    if not finite:
        raise NoValidEta("every grid cell failed cross-validation")
    return cells[min(finite)[3]]


def _cv_table(data: Dataset, etas, k_max: int, folds: int, seed: int) -> list[CvCell]:
    """Out-of-fold MSE for every (eta, k) cell, +inf where any fold failed."""
    x_raw = data.original_x()
    y_raw = data.original_y()
    assignment = kfold_indices(data.n, folds, seed)
    sq_err = {(e, k): [] for e in etas for k in range(1, k_max + 1)}
    failed = {(e, k): 0 for e in etas for k in range(1, k_max + 1)}
    for test_rows in assignment:
        train_rows = np.setdiff1d(np.arange(data.n), test_rows)
        train = standardize(x_raw[train_rows], y_raw[train_rows], scale=data.scaled)
        x_test, y_test = x_raw[test_rows], y_raw[test_rows]
        for eta in etas:
            path, _ = _spls_path(train, eta, k_max)
            for k in range(1, k_max + 1):
                if k <= len(path):
                    active, inner = path[k - 1]
                    pred = inner.intercept + x_test[:, active] @ inner.beta
                    sq_err[(eta, k)].append(float(np.mean((y_test - pred) ** 2)))
                else:
                    failed[(eta, k)] += 1
    cells = []
    for eta in etas:
        for k in range(1, k_max + 1):
            bad = failed[(eta, k)]
            mse = float(np.mean(sq_err[(eta, k)])) if bad == 0 else float("inf")
            cells.append(CvCell(eta=eta, n_components=k, mse=mse, failed_folds=bad))
    return cells


def tune_cv(data: Dataset, config: SparsityConfig, seed: int) -> CvTuning:
    """Full-grid k-fold CV: minimise mean out-of-fold MSE over (eta, K)."""
    cells = _cv_table(data, config.eta_grid, config.k_max, config.folds,
                      derive_seed(seed, "cv-folds"))
    best = _best_cell(cells)
    return CvTuning(eta=best.eta, n_components=best.n_components, table=cells)


def _oob_sparse_loadings(x_raw, y_raw, plan, eta, k, scale):
    """Out-of-bag y-loadings of sparse refits, one row per plan replicate.

    Each replicate refits the (eta, k) sparse model on its resampled rows and
    evaluates the per-component loadings on the rows it never drew; failed
    refits or empty out-of-bag sets give NaN rows.
    """
    n = len(y_raw)
    out = np.full((plan.n_boot, k), np.nan)
    for r in range(plan.n_boot):
        idx = plan.indices[r]
        oob = np.setdiff1d(np.arange(n), idx)
        if oob.size < 3:
            continue
        try:
            sample = standardize(x_raw[idx], y_raw[idx], scale=scale)
            fit = spls_fit(sample, eta, k)
        except (PlsbootError, np.linalg.LinAlgError):
            continue
        out[r] = component_loadings_on(fit.inner, x_raw[oob][:, fit.active],
                                       y_raw[oob])
    return out


def tune_bootyt(
    data: Dataset,
    config: SparsityConfig,
    n_boot: int,
    alpha: float,
    seed: int,
) -> BootTuning:
    """Bootstrap-guided tuning: one K per eta, then a single CV comparison.

    For each eta, K grows while the bootstrap confidence intervals of *all*
    component y-loadings exclude zero.  Each replicate refits the sparse
    model on resampled observation pairs and its loadings are evaluated on
    the replicate's out-of-bag rows, so a component that only models
    resampling noise produces a sign-symmetric loading distribution and
    stops the growth.  Eta values whose first component is already
    insignificant are dropped with a recorded reason.  The surviving
    (eta, K) candidates are compared by k-fold CV MSE.
    """
    if n_boot < 100:
        raise ValueError("need at least 100 bootstrap replicates")
    x_raw = data.original_x()
    y_raw = data.original_y()
    k_per_eta: dict[float, int] = {}
    dropped: dict[float, str] = {}
    trace: list[tuple[float, int, list[ConfidenceInterval]]] = []

    for eta in config.eta_grid:
        eta_seed = derive_seed(seed, "eta", repr(float(eta)))
        plan = resample_pairs(data.n, n_boot, eta_seed)
        k, k_opt, reason = 1, None, ""
        while True:
            if k > config.k_max:
                k_opt = config.k_max
                break
            try:
                original = spls_fit(data, eta, k)
            except TooManyComponents:
                k_opt, reason = k - 1, "rank limit"
                break
            replicate_c = _oob_sparse_loadings(x_raw, y_raw, plan, eta, k,
                                               data.scaled)
            try:
                intervals = [
                    percentile_interval(
                        BootstrapDistribution(replicate_c[:, j],
                                              float(original.inner.y_loadings[j])),
                        alpha,
                    )
                    for j in range(k)
                ]
            except TooFewReplicates:
                k_opt, reason = k - 1, "too many excluded replicates"
                break
            trace.append((eta, k, intervals))
            if all(ci.excludes_zero() for ci in intervals):
                k += 1
            else:
                k_opt, reason = k - 1, "component loading not significant"
                break
        if k_opt == 0:
            dropped[eta] = reason
        else:
            k_per_eta[eta] = k_opt

    if not k_per_eta:
        raise NoValidEta("no eta kept a significant first component")

    # one CV comparison over the s surviving candidates
    full = _cv_table(data, tuple(k_per_eta), max(k_per_eta.values()),
                     config.folds, derive_seed(seed, "final-cv"))
    candidates = [c for c in full
                  if c.n_components == k_per_eta[c.eta]]
    best = _best_cell(candidates)
    return BootTuning(
        eta=best.eta,
        n_components=best.n_components,
        k_per_eta=k_per_eta,
        dropped=dropped,
        cv_table=candidates,
        trace=trace,
    )

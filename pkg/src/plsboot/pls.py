"""Univariate-response partial least squares (PLS1) regression.

Components are built greedily: each weight vector maximises the squared
covariance between the current predictor residuals and the current response
residual, subject to unit Euclidean norm.  Both the predictor matrix and the
response are deflated by ordinary least squares on the newest score before
the next component is extracted.  Coefficients are mapped back to the
original predictor scale so fitted models predict raw inputs directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDirection,
    DimensionMismatch,
    NonFiniteInput,
    TooManyComponents,
    ZeroVarianceColumn,
)

__all__ = [
    "Dataset",
    "PlsFit",
    "standardize",
    "pls_weight",
    "pls_fit",
    "predict",
    "component_loadings_on",
]

# Relative threshold below which a covariance direction counts as exhausted.
DEGENERATE_TOL = 1e-12
# Fixed tolerances documented by the package contract.
WEIGHT_NORM_TOL = 1e-12
SCORE_ORTHO_TOL = 1e-8
DEFLATION_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Centered (and optionally unit-variance scaled) regression data.

    ``x`` has column means 0; if ``scaled`` its columns also have sample
    standard deviation 1 (n-1 divisor).  ``y`` is centered.  The stored
    means/sds allow exact back-mapping of coefficients and reconstruction
    of the raw inputs.
    """

    x: np.ndarray
    y: np.ndarray
    column_means: np.ndarray
    column_sds: np.ndarray
    y_mean: float
    scaled: bool

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def original_x(self) -> np.ndarray:
        """Raw predictor matrix (undo scaling and centering)."""
        return self.x * self.column_sds + self.column_means

    def original_y(self) -> np.ndarray:
        """Raw response vector."""
        return self.y + self.y_mean

    def subset(self, columns) -> "Dataset":
        """Dataset restricted to the given predictor columns."""
        cols = np.asarray(columns, dtype=int)
        return Dataset(
            x=self.x[:, cols],
            y=self.y,
            column_means=self.column_means[cols],
            column_sds=self.column_sds[cols],
            y_mean=self.y_mean,
            scaled=self.scaled,
        )


@dataclass
class PlsFit:
    """Fitted PLS1 model.

    ``weights`` (p x K) holds the unit-norm direction vectors, ``scores``
    (n x K) the pairwise-orthogonal latent variables, ``x_loadings`` (p x K)
    and ``y_loadings`` (K,) the OLS loadings from the deflation steps.
    ``beta``/``intercept`` express the model on the original predictor and
    response scales; ``beta_centered`` is the same coefficient vector on the
    standardized predictors with centered response.
    """

    weights: np.ndarray
    scores: np.ndarray
    x_loadings: np.ndarray
    y_loadings: np.ndarray
    beta: np.ndarray
    intercept: float
    n_components: int
    beta_centered: np.ndarray
    column_means: np.ndarray
    column_sds: np.ndarray
    y_mean: float
    scaled: bool

    @property
    def p(self) -> int:
        return self.weights.shape[0]


def _check_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains non-finite entries")


def standardize(x, y, scale: bool = True) -> Dataset:
    """Center ``x`` and ``y``; scale ``x`` columns to unit sample sd.

    The sample standard deviation uses the n-1 divisor.  With
    ``scale=False`` only centering is applied and unit sds are recorded so
    coefficient back-mapping stays uniform.

    Raises
    ------
    ZeroVarianceColumn
        If any predictor column is constant.
    NonFiniteInput
        If ``x`` or ``y`` contains NaN or infinities.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if x.ndim != 2:
        raise DimensionMismatch("x must be a 2-d matrix")
    n, p = x.shape
    if n < 2:
        raise DimensionMismatch("need at least two observations")
    if y.shape[0] != n:
        raise DimensionMismatch(f"y has length {y.shape[0]}, expected {n}")
    _check_finite(x, "x")
    _check_finite(y, "y")

    means = x.mean(axis=0)
    sds = x.std(axis=0, ddof=1)
    zero = np.flatnonzero(sds == 0.0)
    if zero.size:
        raise ZeroVarianceColumn(int(zero[0]))
    if not scale:
        sds = np.ones(p)
    y_mean = float(y.mean())
    return Dataset(
        x=(x - means) / sds,
        y=y - y_mean,
        column_means=means,
        column_sds=sds,
        y_mean=y_mean,
        scaled=scale,
    )


def pls_weight(x_res, y_res) -> np.ndarray:
    """Unit-norm weight vector maximising squared covariance with ``y_res``.

    The closed-form solution is the normalized cross-covariance
    ``x_res' y_res``.  Raises :class:`DegenerateDirection` when that vector
    is numerically zero (no covariance left to model).
    """
    x_res = np.asarray(x_res, dtype=float)
    y_res = np.asarray(y_res, dtype=float).ravel()
    z = x_res.T @ y_res
    norm = float(np.linalg.norm(z))
    scale = max(1.0, float(np.linalg.norm(x_res)) * float(np.linalg.norm(y_res)))
    if norm <= DEGENERATE_TOL * scale:
        raise DegenerateDirection("residual covariance is numerically zero")
    return z / norm


def pls_fit(data: Dataset, n_components: int) -> PlsFit:
    """Fit a PLS1 model with exactly ``n_components`` components.

    Raises :class:`TooManyComponents` if the request exceeds min(n-1, p) or
    the residual covariance degenerates before all components are built.
    """
    k_req = int(n_components)
    if k_req < 1:
        raise TooManyComponents("component count must be >= 1")
    n, p = data.x.shape
    if k_req > min(n - 1, p):
        raise TooManyComponents(
            f"{k_req} components requested, bound is min(n-1={n - 1}, p={p})"
        )

    x_res = data.x.copy()
    y_res = data.y.copy()
    weights = np.empty((p, k_req))
    scores = np.empty((n, k_req))
    x_loadings = np.empty((p, k_req))
    y_loadings = np.empty(k_req)
    # rotation columns r_k satisfy t_k = X r_k on the standardized scale
    rotation = np.empty((p, k_req))

    for k in range(k_req):
        try:
            w = pls_weight(x_res, y_res)
        except DegenerateDirection as exc:
            raise TooManyComponents(
                f"direction degenerated at component {k + 1} of {k_req}"
            ) from exc
        t = x_res @ w
        tt = float(t @ t)
        if tt <= DEGENERATE_TOL:
            raise TooManyComponents(
                f"score collapsed at component {k + 1} of {k_req}"
            )
        p_load = x_res.T @ t / tt
        c = float(y_res @ t) / tt
        r = w - rotation[:, :k] @ (x_loadings[:, :k].T @ w)
        weights[:, k] = w
        scores[:, k] = t
        x_loadings[:, k] = p_load
        y_loadings[k] = c
        rotation[:, k] = r
        x_res -= np.outer(t, p_load)
        y_res -= c * t

    beta_centered = rotation @ y_loadings
    beta = beta_centered / data.column_sds
    intercept = data.y_mean - float(beta @ data.column_means)
    return PlsFit(
        weights=weights,
        scores=scores,
        x_loadings=x_loadings,
        y_loadings=y_loadings,
        beta=beta,
        intercept=intercept,
        n_components=k_req,
        beta_centered=beta_centered,
        column_means=data.column_means.copy(),
        column_sds=data.column_sds.copy(),
        y_mean=data.y_mean,
        scaled=data.scaled,
    )


def predict(fit, x_new) -> np.ndarray:
    """Predicted response on the original scale for raw predictor rows."""
    x_new = np.atleast_2d(np.asarray(x_new, dtype=float))
    if x_new.shape[1] != fit.beta.shape[0]:
        raise DimensionMismatch(
            f"x has {x_new.shape[1]} columns, model expects {fit.beta.shape[0]}"
        )
    return fit.intercept + x_new @ fit.beta


def component_loadings_on(fit, x_new, y_new) -> np.ndarray:
    """Per-component y-loadings of a fitted model evaluated on held-out rows.

    Mirrors the training recursion on new raw data: standardize with the
    fit's metadata, score each component, record the OLS slope of the
    current response residual on that score, then deflate predictors with
    the training x-loadings and the response with the training y-loading.
    On the training rows this reproduces ``fit.y_loadings``; on independent
    rows it measures how much response signal each component carries
    out-of-sample, with sign.  Degenerate held-out scores yield NaN.
    """
    x_new = np.atleast_2d(np.asarray(x_new, dtype=float))
    y_new = np.asarray(y_new, dtype=float).ravel()
    if x_new.shape[1] != fit.weights.shape[0]:
        raise DimensionMismatch(
            f"x has {x_new.shape[1]} columns, model expects {fit.weights.shape[0]}"
        )
    x_res = (x_new - fit.column_means) / fit.column_sds
    y_res = y_new - fit.y_mean
    k = fit.n_components
    out = np.full(k, np.nan)
    for j in range(k):
        t = x_res @ fit.weights[:, j]
        tt = float(t @ t)
        if tt <= DEGENERATE_TOL:
            break
        out[j] = float(y_res @ t) / tt
        x_res = x_res - np.outer(t, fit.x_loadings[:, j])
        y_res = y_res - fit.y_loadings[j] * t
    return out

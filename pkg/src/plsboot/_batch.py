"""Vectorized PLS refits across a whole resampling plan.

Fits one PLS model per bootstrap replicate simultaneously, holding the
replicate datasets as stacked tensors, and evaluates each new component's
y-loading on the replicate's out-of-bag rows.  This is the compute kernel
behind the bootstrap component-count criterion; a Python-level loop over
replicates would be ~50x slower for the nested resampling runs.

Replicates are processed in fixed-size chunks to bound peak memory; chunk
boundaries do not affect results (all operations are per-replicate).
"""

from __future__ import annotations

import numpy as np

__all__ = ["OobLoadingEngine"]

_REL_TOL = 1e-10
_CHUNK_ROWS = 256


class _ChunkState:
    """Deflation state for one chunk of replicates."""

    def __init__(self, x: np.ndarray, y: np.ndarray, idx: np.ndarray, scale: bool):
        c, n = idx.shape
        xb_raw = x[idx]  # (c, n, p)
        mu = xb_raw.mean(axis=1)
        sd = xb_raw.std(axis=1, ddof=1)
        alive = np.all(sd > 0.0, axis=1)
        if not scale:
            sd = np.ones_like(sd)
        sd_safe = np.where(sd > 0.0, sd, 1.0)
        ym = y[idx].mean(axis=1)

        self.xb = (xb_raw - mu[:, None, :]) / sd_safe[:, None, :]
        self.yb = y[idx] - ym[:, None]
        # full original rows under each replicate's standardization
        self.xf = (x[None, :, :] - mu[:, None, :]) / sd_safe[:, None, :]
        self.yf = np.broadcast_to(y, (c, y.size)) - ym[:, None]
        self.yf = np.ascontiguousarray(self.yf)

        oob = np.ones((c, n), dtype=bool)
        np.put_along_axis(oob, idx, False, axis=1)
        self.oob = oob
        alive &= oob.sum(axis=1) >= 3
        self.alive = alive
        self.z_scale = None  # first-component covariance norm, degeneracy reference
        self.t_scale = None

    def extend(self) -> np.ndarray:
        """Add one component to every live replicate; return OOB loadings."""
        c = self.alive.shape[0]
        out = np.full(c, np.nan)
        z = np.einsum("rnp,rn->rp", self.xb, self.yb)
        znorm = np.linalg.norm(z, axis=1)
        if self.z_scale is None:
            self.z_scale = np.maximum(znorm, 1e-300)
        self.alive &= znorm > _REL_TOL * self.z_scale

        znorm_safe = np.where(znorm > 0.0, znorm, 1.0)
        w = z / znorm_safe[:, None]
        t = np.einsum("rnp,rp->rn", self.xb, w)
        tt = np.einsum("rn,rn->r", t, t)
        if self.t_scale is None:
            self.t_scale = np.maximum(tt, 1e-300)
        self.alive &= tt > _REL_TOL * self.t_scale
        tt_safe = np.where(tt > 0.0, tt, 1.0)

        p_load = np.einsum("rnp,rn->rp", self.xb, t) / tt_safe[:, None]
        c_train = np.einsum("rn,rn->r", self.yb, t) / tt_safe
        self.xb -= t[:, :, None] * p_load[:, None, :]
        self.yb -= c_train[:, None] * t

        tf = np.einsum("rnp,rp->rn", self.xf, w)
        num = np.einsum("rn,rn,rn->r", self.yf, tf, self.oob)
        den = np.einsum("rn,rn,rn->r", tf, tf, self.oob)
        self.alive &= den > 0.0
        den_safe = np.where(den > 0.0, den, 1.0)
        self.xf -= tf[:, :, None] * p_load[:, None, :]
        self.yf -= c_train[:, None] * tf

        out[self.alive] = (num / den_safe)[self.alive]
        return out


class OobLoadingEngine:
    """Grow components replicate-wise; yield out-of-bag loadings per step.

    Each replicate's model is refit on its resampled (in-bag) rows with its
    own centering/scaling; the component loadings are then measured on the
    rows the replicate never drew, deflating with the training loadings.
    Dead replicates (zero-variance column, exhausted covariance, empty
    out-of-bag set) yield NaN from the step that killed them onward.
    """

    def __init__(self, x, y, indices, scale: bool, chunk_rows: int = _CHUNK_ROWS):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float).ravel()
        indices = np.asarray(indices)
        self.n_boot = indices.shape[0]
        self.k_done = 0
        self.k_bound = min(indices.shape[1] - 1, x.shape[1])
        self._chunks = [
            _ChunkState(x, y, indices[lo : lo + chunk_rows], scale)
            for lo in range(0, self.n_boot, chunk_rows)
        ]

    def extend(self) -> np.ndarray:
        """OOB loadings of the next component, NaN for dead replicates."""
        if self.k_done >= self.k_bound:
            return np.full(self.n_boot, np.nan)
        with np.errstate(invalid="ignore", divide="ignore"):
            cols = [chunk.extend() for chunk in self._chunks]
        self.k_done += 1
        return np.concatenate(cols)

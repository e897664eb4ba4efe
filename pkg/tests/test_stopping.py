import numpy as np
import pytest

from plsboot import pls_fit, resample_pairs, standardize
from plsboot._batch import OobLoadingEngine
from plsboot.pls import component_loadings_on
from plsboot.stopping import (
    StoppingConfig,
    bootyt_select_k,
    q2_select_k,
)


def one_factor_data(seed, n=60, p=12, snr=10.0):
    """Two equal latent blocks; the signal is exactly one component."""
    rng = np.random.default_rng(seed)
    h1 = rng.normal(scale=5.0, size=n)
    h2 = rng.normal(scale=5.0, size=n)
    x = rng.normal(scale=np.sqrt(0.1), size=(n, p))
    x[:, : p // 2] += h1[:, None]
    x[:, p // 2 :] += h2[:, None]
    signal = 3.0 * h1 - 4.0 * h2
    y = signal + rng.normal(scale=np.sqrt(625.0 / snr), size=n)
    return standardize(x, y)


def noise_data(seed, n=40, p=8):
    rng = np.random.default_rng(seed)
    return standardize(rng.normal(size=(n, p)), rng.normal(size=n))


class TestBatchEngine:
    def test_matches_scalar_holdout_loadings(self):
        """Batched kernel agrees with the per-replicate scalar path."""
        rng = np.random.default_rng(0)
        x = rng.normal(size=(25, 6))
        y = x @ rng.normal(size=6) + rng.normal(size=25)
        plan = resample_pairs(25, 40, seed=3)
        engine = OobLoadingEngine(x, y, plan.indices, scale=True, chunk_rows=16)
        k = 3
        batched = np.column_stack([engine.extend() for _ in range(k)])
        for r in range(plan.n_boot):
            idx = plan.indices[r]
            oob = np.setdiff1d(np.arange(25), idx)
            data = standardize(x[idx], y[idx])
            fit = pls_fit(data, k)
            expected = component_loadings_on(fit, x[oob], y[oob])
            np.testing.assert_allclose(batched[r], expected, atol=1e-10)

    def test_unscaled_mode(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(20, 4)) * 3.0
        y = x @ np.ones(4) + rng.normal(size=20)
        plan = resample_pairs(20, 10, seed=5)
        engine = OobLoadingEngine(x, y, plan.indices, scale=False)
        col = engine.extend()
        r = 4
        idx = plan.indices[r]
        oob = np.setdiff1d(np.arange(20), idx)
        fit = pls_fit(standardize(x[idx], y[idx], scale=False), 1)
        expected = component_loadings_on(fit, x[oob], y[oob])
        np.testing.assert_allclose(col[r], expected[0], atol=1e-12)

    def test_exhausted_components_give_nan(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(30, 2))
        y = x @ np.array([1.0, -1.0]) + 0.1 * rng.normal(size=30)
        plan = resample_pairs(30, 8, seed=7)
        engine = OobLoadingEngine(x, y, plan.indices, scale=True)
        engine.extend()
        engine.extend()
        third = engine.extend()  # beyond p=2: engine bound reached
        assert np.all(np.isnan(third))


class TestBootytSelectK:
    def test_null_selects_zero_components(self):
        cfg = StoppingConfig(k_max=3, n_boot=150, alpha=0.05)
        zeros = sum(
            bootyt_select_k(noise_data(seed), cfg, seed=seed).k == 0
            for seed in range(10)
        )
        assert zeros >= 9

    def test_pure_signal_selects_at_least_one(self):
        cfg = StoppingConfig(k_max=3, n_boot=150, alpha=0.05)
        hits = 0
        for seed in range(20):
            rng = np.random.default_rng(700 + seed)
            x = rng.normal(size=(40, 6))
            w = rng.normal(size=6)
            data = standardize(x, x @ w)  # exact linear response, no noise
            if bootyt_select_k(data, cfg, seed=seed).k >= 1 is True:
                hits += 1
        assert hits >= 19

    def test_one_component_design_mode_is_one(self):
        cfg = StoppingConfig(k_max=4, n_boot=150, alpha=0.05)
        ks = [
            bootyt_select_k(one_factor_data(900 + seed), cfg, seed=seed).k
            for seed in range(10)
        ]
        assert sum(k == 1 for k in ks) >= 8

    def test_trace_invariant(self):
        cfg = StoppingConfig(k_max=4, n_boot=150, alpha=0.05)
        sel = bootyt_select_k(one_factor_data(42), cfg, seed=11)
        for probe, intervals in enumerate(sel.trace, start=1):
            assert len(intervals) == probe
        for probe in range(1, sel.k + 1):
            assert all(ci.excludes_zero() for ci in sel.trace[probe - 1])
        if len(sel.trace) > sel.k:  # the probe that stopped the growth
            assert any(not ci.excludes_zero() for ci in sel.trace[sel.k])

    def test_deterministic(self):
        cfg = StoppingConfig(k_max=3, n_boot=120, alpha=0.05)
        data = one_factor_data(5)
        a = bootyt_select_k(data, cfg, seed=9)
        b = bootyt_select_k(data, cfg, seed=9)
        assert a.k == b.k
        assert [(ci.lo, ci.hi) for cis in a.trace for ci in cis] == [
            (ci.lo, ci.hi) for cis in b.trace for ci in cis
        ]

    def test_trace_rows_schema(self):
        cfg = StoppingConfig(k_max=3, n_boot=120, alpha=0.05)
        sel = bootyt_select_k(one_factor_data(6), cfg, seed=2)
        rows = sel.trace_rows()
        assert all(len(row) == 5 for row in rows)
        assert rows[0][0] == 1 and rows[0][1] == 1


class TestQ2SelectK:
    def test_noise_forces_floor(self):
        cfg = StoppingConfig(k_max=4, folds=5)
        sel = q2_select_k(noise_data(3), cfg, seed=1)
        assert sel.k == 1
        assert sel.forced_floor
        assert sel.q2[0] < cfg.q2_threshold

    def test_two_component_signal(self):
        cfg = StoppingConfig(k_max=5, folds=5)
        hits = 0
        for seed in range(10):
            rng = np.random.default_rng(800 + seed)
            n, p = 80, 15
            h1 = rng.normal(scale=5.0, size=n)
            h2 = rng.normal(scale=5.0, size=n)
            x = rng.normal(scale=np.sqrt(0.1), size=(n, p))
            x[:, :5] += h1[:, None]
            x[:, 5:10] += h2[:, None]
            y = 3.0 * h1 - 1.0 * h2 + 0.5 * rng.normal(size=n)
            sel = q2_select_k(standardize(x, y), cfg, seed=seed)
            if sel.k == 2:
                hits += 1
        assert hits >= 9

    def test_minus_infinity_threshold_gives_k_max(self):
        cfg = StoppingConfig(k_max=3, folds=5, q2_threshold=-np.inf)
        sel = q2_select_k(one_factor_data(7), cfg, seed=0)
        assert sel.k == 3

    def test_monotone_in_threshold(self):
        data = one_factor_data(8)
        ks = []
        for thr in (-np.inf, 0.0975, 0.5, 0.99):
            cfg = StoppingConfig(k_max=4, folds=5, q2_threshold=thr)
            ks.append(q2_select_k(data, cfg, seed=4).k)
        assert all(a >= b for a, b in zip(ks, ks[1:]))

import numpy as np
import pytest

from plsboot import (
    DegenerateDirection,
    DimensionMismatch,
    NonFiniteInput,
    TooManyComponents,
    ZeroVarianceColumn,
    pls_fit,
    pls_weight,
    predict,
    standardize,
)


def ols_beta(x, y):
    """Normal-equations oracle with intercept, on raw data."""
    design = np.column_stack([np.ones(len(y)), x])
    coef = np.linalg.solve(design.T @ design, design.T @ y)
    return coef[0], coef[1:]


def random_dataset(rng, n=30, p=5, scale=True):
    x = rng.normal(size=(n, p)) @ rng.normal(size=(p, p))
    y = x @ rng.normal(size=p) + rng.normal(size=n)
    return standardize(x, y, scale=scale)


class TestStandardize:
    def test_hand_example(self):
        data = standardize(np.array([[1.0], [3.0]]), np.array([0.0, 2.0]))
        np.testing.assert_allclose(data.x, [[-0.7071], [0.7071]], atol=5e-5)
        np.testing.assert_allclose(data.y, [-1.0, 1.0])
        assert data.y_mean == 1.0
        np.testing.assert_allclose(data.column_sds, [np.sqrt(2.0)])

    def test_idempotent_on_standardized_input(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(20, 4))
        first = standardize(x, rng.normal(size=20))
        again = standardize(first.x, first.y)
        np.testing.assert_allclose(again.x, first.x, atol=1e-12)
        np.testing.assert_allclose(again.column_means, np.zeros(4), atol=1e-15)
        np.testing.assert_allclose(again.column_sds, np.ones(4), rtol=1e-12)

    def test_constant_column_rejected(self):
        x = np.array([[1.0, 2.0], [1.0, 3.0], [1.0, 5.0]])
        with pytest.raises(ZeroVarianceColumn) as err:
            standardize(x, np.arange(3.0))
        assert err.value.column == 0

    def test_non_finite_rejected(self):
        x = np.array([[1.0], [np.nan]])
        with pytest.raises(NonFiniteInput):
            standardize(x, np.array([0.0, 1.0]))

    def test_roundtrip_original(self):
        rng = np.random.default_rng(1)
        x = rng.normal(loc=3.0, scale=2.5, size=(15, 3))
        y = rng.normal(loc=-1.0, size=15)
        data = standardize(x, y)
        np.testing.assert_allclose(data.original_x(), x, atol=1e-12)
        np.testing.assert_allclose(data.original_y(), y, atol=1e-12)

    def test_unscaled_mode_records_unit_sds(self):
        rng = np.random.default_rng(2)
        x = rng.normal(scale=4.0, size=(10, 2))
        data = standardize(x, rng.normal(size=10), scale=False)
        assert not data.scaled
        np.testing.assert_allclose(data.column_sds, [1.0, 1.0])
        np.testing.assert_allclose(data.x.mean(axis=0), [0.0, 0.0], atol=1e-12)


class TestPlsWeight:
    def test_single_predictor(self):
        w = pls_weight(np.array([[1.0], [2.0]]), np.array([1.0, 2.0]))
        np.testing.assert_allclose(w, [1.0])

    def test_hand_normalization(self):
        x = np.array([[3.0, 4.0], [0.0, 0.0]])
        y = np.array([1.0, 0.0])
        np.testing.assert_allclose(pls_weight(x, y), [0.6, 0.8])

    def test_orthogonal_residual_degenerates(self):
        x = np.array([[1.0], [-1.0]])
        y = np.array([1.0, 1.0])
        with pytest.raises(DegenerateDirection):
            pls_weight(x, y)


class TestPlsFit:
    def test_full_rank_equals_ols(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            p = int(rng.integers(2, 8))
            x = rng.normal(size=(40, p))
            y = x @ rng.normal(size=p) + rng.normal(size=40)
            data = standardize(x, y)
            fit = pls_fit(data, p)
            intercept, beta = ols_beta(x, y)
            np.testing.assert_allclose(fit.beta, beta, atol=1e-8)
            np.testing.assert_allclose(fit.intercept, intercept, atol=1e-8)

    def test_single_predictor_slope(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(25, 1))
        y = 2.0 * x[:, 0] + rng.normal(size=25)
        fit = pls_fit(standardize(x, y), 1)
        _, beta = ols_beta(x, y)
        np.testing.assert_allclose(fit.beta, beta, atol=1e-10)

    def test_too_many_components(self):
        rng = np.random.default_rng(4)
        data = random_dataset(rng, n=10, p=3)
        with pytest.raises(TooManyComponents):
            pls_fit(data, 10)

    def test_degenerate_before_k(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(20, 2))
        x = np.column_stack([x[:, 0], x[:, 0] * 2.0, x[:, 1]])  # rank 2
        y = x[:, 0] + x[:, 2]
        data = standardize(x, y + rng.normal(scale=1e-4, size=20))
        with pytest.raises(TooManyComponents):
            pls_fit(data, 3)

    def test_weight_norms_and_score_orthogonality(self):
        rng = np.random.default_rng(6)
        for seed in range(5):
            data = random_dataset(np.random.default_rng(seed), n=40, p=6)
            fit = pls_fit(data, 4)
            np.testing.assert_allclose(
                np.linalg.norm(fit.weights, axis=0), np.ones(4), atol=1e-12
            )
            gram = fit.scores.T @ fit.scores
            norms = np.sqrt(np.diag(gram))
            off = gram - np.diag(np.diag(gram))
            assert np.all(np.abs(off) <= 1e-8 * np.outer(norms, norms))
        del rng

    def test_deflation_exactness(self):
        data = random_dataset(np.random.default_rng(7), n=30, p=5)
        fit = pls_fit(data, 3)
        x_res = data.x.copy()
        for k in range(3):
            x_res -= np.outer(fit.scores[:, k], fit.x_loadings[:, k])
            assert np.max(np.abs(x_res.T @ fit.scores[:, k])) < 1e-10

    def test_prediction_consistency(self):
        data = random_dataset(np.random.default_rng(8), n=30, p=5)
        fit = pls_fit(data, 3)
        in_sample = predict(fit, data.original_x())
        component_form = fit.scores @ fit.y_loadings + data.y_mean
        np.testing.assert_allclose(in_sample, component_form, atol=1e-10)


class TestPredict:
    def test_residuals_orthogonal_to_scores(self):
        data = random_dataset(np.random.default_rng(9), n=30, p=4)
        fit = pls_fit(data, 2)
        resid = data.original_y() - predict(fit, data.original_x())
        assert np.max(np.abs(resid @ fit.scores)) < 1e-8

    def test_column_means_row_predicts_y_mean(self):
        data = random_dataset(np.random.default_rng(10), n=25, p=4)
        pred = predict(pls_fit(data, 2), data.column_means[None, :])
        np.testing.assert_allclose(pred, [data.y_mean], atol=1e-10)

    def test_new_rows_match_expanded_component_form(self):
        rng = np.random.default_rng(11)
        data = random_dataset(rng, n=30, p=4)
        fit = pls_fit(data, 3)
        x_new = rng.normal(size=(5, 4))
        # independent oracle: run the deflation recursions on the new rows
        x_std = (x_new - data.column_means) / data.column_sds
        x_res = x_std.copy()
        pred = np.full(5, data.y_mean)
        for k in range(3):
            t = x_res @ fit.weights[:, k]
            pred += fit.y_loadings[k] * t
            x_res -= np.outer(t, fit.x_loadings[:, k])
        np.testing.assert_allclose(predict(fit, x_new), pred, atol=1e-10)

    def test_dimension_mismatch(self):
        data = random_dataset(np.random.default_rng(12), n=20, p=3)
        fit = pls_fit(data, 1)
        with pytest.raises(DimensionMismatch):
            predict(fit, np.zeros((2, 5)))

import numpy as np
import pytest

from bimonetary.colimit import (
    ColimitConfig,
    build_indicator,
    dynamic_weights,
    pca_aggregate,
    pca_fit,
    validate_and_forecast,
)
from bimonetary.errors import AllZeroWeights, ConstantColumn, InsufficientRows
from bimonetary.panel import Panel, Series
from tests.conftest import SEED, daily_dates


def fresh_rng():
    return np.random.default_rng(SEED)


class TestPcaFit:
    def test_rank_one_data(self):
        rng = fresh_rng()
        factor = rng.standard_normal(300)
        data = np.outer(factor, [1.0, -2.0, 0.5])
        model = pca_fit(data, 3, standardize=False)
        assert model.explained_variance_ratio[0] == pytest.approx(1.0, abs=1e-9)

    def test_two_uncorrelated_standardized_columns(self):
        data = fresh_rng().standard_normal((20000, 2))
        model = pca_fit(data, 2, standardize=True)
        assert model.explained_variance_ratio[0] == pytest.approx(0.5, abs=0.05)
        assert model.explained_variance_ratio[1] == pytest.approx(0.5, abs=0.05)

    def test_full_component_ratios_sum_to_one(self):
        data = fresh_rng().standard_normal((100, 4))
        model = pca_fit(data, 4, standardize=True)
        assert model.explained_variance_ratio.sum() == pytest.approx(1.0, abs=1e-9)

    def test_ratios_non_increasing_in_unit_interval(self):
        data = fresh_rng().standard_normal((200, 5)) * [1, 2, 3, 4, 5]
        model = pca_fit(data, 5, standardize=False)
        r = model.explained_variance_ratio
        assert np.all(np.diff(r) <= 1e-12)
        assert np.all((r >= 0) & (r <= 1))

    def test_loadings_orthonormal(self):
        data = fresh_rng().standard_normal((150, 6))
        model = pca_fit(data, 4, standardize=True)
        gram = model.loadings.T @ model.loadings
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-9)

    def test_full_reconstruction(self):
        rng = fresh_rng()
        data = rng.standard_normal((80, 5)) @ rng.standard_normal((5, 5))
        model = pca_fit(data, 5, standardize=True)
        scaled = (data - model.column_means) / model.column_scales
        reconstructed = (scaled @ model.loadings) @ model.loadings.T
        np.testing.assert_allclose(reconstructed, scaled, atol=1e-8)

    def test_constant_column_with_standardize(self):
        data = np.column_stack(
            [fresh_rng().standard_normal(50), np.full(50, 2.0)]
        )
        with pytest.raises(ConstantColumn):
            pca_fit(data, 2, standardize=True)

    def test_insufficient_rows(self):
        with pytest.raises(InsufficientRows):
            pca_fit(np.zeros((3, 5)), 2)

    def test_matches_reference_implementation(self):
        decomposition = pytest.importorskip("sklearn.decomposition")
        data = fresh_rng().standard_normal((200, 4)) * [1, 3, 0.5, 2]
        mine = pca_fit(data, 3, standardize=False)
        ref = decomposition.PCA(n_components=3).fit(data)
        np.testing.assert_allclose(
            mine.explained_variance_ratio,
            ref.explained_variance_ratio_,
            atol=1e-10,
        )
        np.testing.assert_allclose(
            np.abs(mine.loadings), np.abs(ref.components_.T), atol=1e-8
        )


class TestPcaAggregate:
    def test_rank_one_aggregate_tracks_factor(self):
        rng = fresh_rng()
        factor = rng.standard_normal(300)
        data = np.outer(factor, [1.0, -2.0, 0.5]) + 10.0
        model = pca_fit(data, 1, standardize=False)
        aggregate = pca_aggregate(model, data)
        corr = np.corrcoef(aggregate, factor)[0, 1]
        assert abs(corr) == pytest.approx(1.0, abs=1e-9)

    def test_centered_aggregate_has_zero_mean(self):
        data = fresh_rng().standard_normal((150, 4))
        model = pca_fit(data, 3, standardize=True)
        aggregate = pca_aggregate(model, data)
        assert aggregate.mean() == pytest.approx(0.0, abs=1e-9)

    def test_single_component_is_scaled_score(self):
        data = fresh_rng().standard_normal((100, 3))
        model = pca_fit(data, 1, standardize=True)
        scaled = (data - model.column_means) / model.column_scales
        score = scaled @ model.loadings[:, 0]
        np.testing.assert_allclose(
            pca_aggregate(model, data),
            model.explained_variance_ratio[0] * score,
            atol=1e-12,
        )

    def test_permutation_invariance_of_ratio_set_and_abs_aggregate(self):
        rng = fresh_rng()
        data = rng.standard_normal((200, 4)) @ rng.standard_normal((4, 4))
        model_a = pca_fit(data, 4, standardize=True)
        permutation = [2, 0, 3, 1]
        model_b = pca_fit(data[:, permutation], 4, standardize=True)
        np.testing.assert_allclose(
            model_a.explained_variance_ratio,
            model_b.explained_variance_ratio,
            atol=1e-9,
        )
        agg_a = pca_aggregate(model_a, data)
        agg_b = pca_aggregate(model_b, data[:, permutation])
        np.testing.assert_allclose(np.abs(agg_a), np.abs(agg_b), atol=1e-9)


class TestDynamicWeights:
    def test_copy_outweighs_noise(self):
        rng = fresh_rng()
        reference = rng.standard_normal(200)
        panel = Panel(
            daily_dates(200),
            {
                "ref": Series.of(reference),
                "copy": Series.of(reference),
                "noise": Series.of(rng.standard_normal(200)),
            },
        )
        weights = dynamic_weights(panel, ["copy", "noise"], "ref", 50, 2)
        assert weights["copy"] > weights["noise"]
        assert sum(weights.values()) == pytest.approx(1.0, abs=1e-12)

    def test_single_variable_gets_unit_weight(self):
        rng = fresh_rng()
        panel = Panel(
            daily_dates(50),
            {
                "ref": Series.of(rng.standard_normal(50)),
                "v": Series.of(rng.standard_normal(50)),
            },
        )
        weights = dynamic_weights(panel, ["v"], "ref", 20, 2)
        assert weights == {"v": 1.0}

    def test_sign_flip_symmetry(self):
        rng = fresh_rng()
        v = rng.standard_normal(120)
        panel = Panel(
            daily_dates(120),
            {
                "ref": Series.of(v),
                "plus": Series.of(v),
                "minus": Series.of(-v),
            },
        )
        weights = dynamic_weights(panel, ["plus", "minus"], "ref", 40, 2)
        assert weights["plus"] == pytest.approx(0.5, abs=1e-12)
        assert weights["minus"] == pytest.approx(0.5, abs=1e-12)

    def test_all_zero_weights(self):
        panel = Panel(
            daily_dates(30),
            {
                "ref": Series.of(np.ones(30)),  # constant: correlation undefined
                "v": Series.of(fresh_rng().standard_normal(30)),
            },
        )
        with pytest.raises(AllZeroWeights):
            dynamic_weights(panel, ["v"], "ref", 10, 2)


class TestBuildIndicator:
    def test_scaled_attains_reference_extremes(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        reference = canonical_panel.column("E")
        scaled = [v for v in indicator.scaled.values if v is not None]
        assert max(scaled) == max(v for v in reference.values)
        assert min(scaled) == min(v for v in reference.values)

    def test_weights_normalized(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        assert sum(indicator.dynamic_weights.values()) == pytest.approx(
            1.0, abs=1e-12
        )
        assert all(w >= 0 for w in indicator.dynamic_weights.values())

    def test_smoothing_constant_series_is_identity(self):
        rng = fresh_rng()
        n = 60
        base = {
            "a": rng.standard_normal(n),
            "b": rng.standard_normal(n),
            "E": np.full(n, 3.0),
        }
        # constant reference: scaled output would be constant too; check the
        # smoothing contract directly on a constant input series instead
        from bimonetary.panel import rolling_mean

        smoothed = rolling_mean(Series.of(np.full(30, 7.0)), 30, 1)
        assert smoothed.values == (7.0,) * 30

    def test_one_hot_weights_reproduce_that_column(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        # re-weight manually with a one-hot map and compare
        matrix = canonical_panel.to_matrix(ColimitConfig().variables)
        one_hot = {name: 0.0 for name in ColimitConfig().variables}
        one_hot["M2"] = 1.0
        weighted = matrix @ np.array(
            [one_hot[name] for name in ColimitConfig().variables]
        )
        np.testing.assert_allclose(
            weighted, canonical_panel.column("M2").to_array(), atol=1e-12
        )

    def test_series_lengths_match_panel(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        for series in (
            indicator.pca_aggregate,
            indicator.weighted_aggregate,
            indicator.scaled,
            indicator.smoothed,
        ):
            assert len(series) == canonical_panel.n_rows


class TestValidateAndForecast:
    def test_lead_lag_indicator_granger_causes_reference(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        e = canonical_panel.column("E").to_array()
        rng = fresh_rng()
        lead = np.empty_like(e)
        lead[:-1] = e[1:]
        lead[-1] = e[-1]
        lead = lead + 0.01 * rng.standard_normal(len(e))
        constructed = indicator.__class__(
            indicator.pca_aggregate,
            indicator.dynamic_weights,
            indicator.weighted_aggregate,
            indicator.scaled,
            Series.of(lead),
        )
        causality, forecast = validate_and_forecast(canonical_panel, constructed)
        assert causality.at(1).p_value < 0.01
        assert forecast.shape == (10, 3)

    def test_noise_indicator_is_not_causal(self, canonical_panel):
        rng = fresh_rng()
        rng.standard_normal(len(canonical_panel.dates))  # skip lead-lag draws
        noise = rng.standard_normal(canonical_panel.n_rows)
        indicator = build_indicator(canonical_panel)
        constructed = indicator.__class__(
            indicator.pca_aggregate,
            indicator.dynamic_weights,
            indicator.weighted_aggregate,
            indicator.scaled,
            Series.of(noise),
        )
        causality, _ = validate_and_forecast(canonical_panel, constructed)
        assert causality.at(1).p_value > 0.05

    def test_forecast_shape_contract(self, canonical_panel):
        indicator = build_indicator(canonical_panel)
        _, forecast = validate_and_forecast(canonical_panel, indicator, steps=10)
        assert forecast.shape == (10, 3)

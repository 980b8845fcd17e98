from datetime import date

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bimonetary.errors import (
    DegenerateRange,
    DuplicateDate,
    LeadingOrTrailingGap,
    MissingColumn,
    SeriesTooShort,
    UnparseableValue,
)
from bimonetary.panel import (
    CANONICAL_VARIABLES,
    Panel,
    Series,
    difference,
    linear_interpolate,
    load_csv,
    minmax_rescale,
    rolling_corr,
    rolling_mean,
    write_csv,
)
from tests.conftest import daily_dates, make_canonical_panel


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def canonical_header():
    return ",".join(["Date", *CANONICAL_VARIABLES])


def canonical_row(day, value):
    return ",".join([day] + [str(value)] * len(CANONICAL_VARIABLES))


class TestLoadCsv:
    def test_two_row_canonical_file(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(
            path,
            [
                canonical_header(),
                canonical_row("2018-01-01", 1.5),
                canonical_row("2018-01-02", 2.5),
            ],
        )
        panel = load_csv(path, CANONICAL_VARIABLES)
        assert panel.n_rows == 2
        assert len(panel.variables) == 16
        assert panel.column("M2").values == (1.5, 2.5)

    def test_missing_schema_column(self, tmp_path):
        path = tmp_path / "data.csv"
        header = ",".join(
            ["Date"] + [c for c in CANONICAL_VARIABLES if c != "Pi Exp"]
        )
        write_lines(path, [header])
        with pytest.raises(MissingColumn) as info:
            load_csv(path, CANONICAL_VARIABLES)
        assert info.value.name == "Pi Exp"

    def test_rows_out_of_order_are_sorted(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(
            path,
            [
                "Date,x",
                "2018-01-03,3",
                "2018-01-01,1",
                "2018-01-02,2",
            ],
        )
        panel = load_csv(path)
        assert panel.dates == daily_dates(3)
        assert panel.column("x").values == (1.0, 2.0, 3.0)

    def test_duplicate_date(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(path, ["Date,x", "2018-01-01,1", "2018-01-01,2"])
        with pytest.raises(DuplicateDate):
            load_csv(path)

    def test_unparseable_value_carries_location(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(path, ["Date,x", "2018-01-01,oops"])
        with pytest.raises(UnparseableValue) as info:
            load_csv(path)
        assert info.value.row == 2
        assert info.value.column == "x"

    def test_time_suffix_is_truncated(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(path, ["Date,x", "2018-01-01 00:00:00,1"])
        panel = load_csv(path)
        assert panel.dates[0] == date(2018, 1, 1)

    def test_empty_cell_is_missing(self, tmp_path):
        path = tmp_path / "data.csv"
        write_lines(path, ["Date,x", "2018-01-01,", "2018-01-02,2"])
        panel = load_csv(path)
        assert panel.column("x").values == (None, 2.0)

    def test_short_row_is_an_error(self, tmp_path):
        path = tmp_path / "short.csv"
        write_lines(path, ["Date,x,y", "2018-01-01,1"])
        with pytest.raises(UnparseableValue):
            load_csv(path)

    def test_non_finite_tokens_rejected(self, tmp_path):
        for token in ("nan", "inf", "-inf", "1e400"):
            path = tmp_path / "bad.csv"
            write_lines(path, ["Date,x", f"2018-01-01,{token}"])
            with pytest.raises(UnparseableValue):
                load_csv(path)

    def test_round_trip_is_identity(self, tmp_path):
        panel = make_canonical_panel(50)
        path = tmp_path / "out.csv"
        write_csv(panel, path)
        assert load_csv(path, CANONICAL_VARIABLES) == panel


class TestLinearInterpolate:
    def test_midpoint(self):
        out = linear_interpolate(Series.of([1, None, 3]))
        assert out.values == (1.0, 2.0, 3.0)

    def test_equal_spacing(self):
        out = linear_interpolate(Series.of([0, None, None, 3]))
        assert out.values == (0.0, 1.0, 2.0, 3.0)

    def test_leading_gap(self):
        with pytest.raises(LeadingOrTrailingGap):
            linear_interpolate(Series.of([None, 2, 3]))

    def test_trailing_gap(self):
        with pytest.raises(LeadingOrTrailingGap):
            linear_interpolate(Series.of([1, 2, None]))


class TestDifference:
    def test_first_difference(self):
        assert difference(Series.of([1, 3, 6]), 1).values == (2.0, 3.0)

    def test_second_difference(self):
        assert difference(Series.of([1, 3, 6]), 2).values == (1.0,)

    def test_constant_series_goes_to_zero(self):
        assert difference(Series.of([5, 5, 5, 5]), 1).values == (0.0, 0.0, 0.0)

    def test_too_short(self):
        with pytest.raises(SeriesTooShort):
            difference(Series.of([1, 2]), 2)

    def test_difference_of_cumsum_recovers_tail(self, rng):
        values = rng.standard_normal(40)
        cumulative = Series.of(np.cumsum(values))
        recovered = difference(cumulative, 1)
        assert np.allclose(recovered.to_array(), values[1:], rtol=0, atol=1e-12)


class TestRollingMean:
    def test_hand_example(self):
        out = rolling_mean(Series.of([1, 2, 3]), window=2, min_periods=1)
        assert out.values == (1.0, 1.5, 2.5)

    def test_constant(self):
        out = rolling_mean(Series.of([5, 5, 5]), window=3, min_periods=1)
        assert out.values == (5.0, 5.0, 5.0)

    def test_insufficient_periods(self):
        out = rolling_mean(Series.of([1, 2]), window=3, min_periods=3)
        assert out.values == (None, None)

    def test_min_periods_larger_than_window(self):
        with pytest.raises(ValueError):
            rolling_mean(Series.of([1]), window=2, min_periods=3)


class TestRollingCorr:
    def test_self_correlation(self, rng):
        x = Series.of(rng.standard_normal(30))
        out = rolling_corr(x, x, window=10, min_periods=2)
        for v in out.values[2:]:
            assert v == pytest.approx(1.0, abs=1e-12)

    def test_anti_correlation(self, rng):
        values = rng.standard_normal(30)
        out = rolling_corr(
            Series.of(values), Series.of(-values), window=10, min_periods=2
        )
        for v in out.values[2:]:
            assert v == pytest.approx(-1.0, abs=1e-12)

    def test_constant_window_is_missing(self):
        x = Series.of([1, 1, 1, 1])
        y = Series.of([1, 2, 3, 4])
        out = rolling_corr(x, y, window=3, min_periods=1)
        assert out.values == (None,) * 4

    def test_full_window_matches_full_sample_pearson(self, rng):
        x = rng.standard_normal(60)
        y = 0.3 * x + rng.standard_normal(60)
        out = rolling_corr(Series.of(x), Series.of(y), window=60, min_periods=60)
        expected = np.corrcoef(x, y)[0, 1]
        assert out.values[-1] == pytest.approx(expected, abs=1e-12)


class TestMinmaxRescale:
    def test_affine_endpoints(self):
        out = minmax_rescale(Series.of([0, 5, 10]), Series.of([2, 4]))
        assert out.values == (2.0, 3.0, 4.0)

    def test_identity_onto_itself(self):
        values = Series.of([1.5, -2.0, 7.25, 0.5])
        out = minmax_rescale(values, values)
        assert np.allclose(out.to_array(), values.to_array(), rtol=1e-12)

    def test_degenerate_source(self):
        with pytest.raises(DegenerateRange):
            minmax_rescale(Series.of([3, 3, 3]), Series.of([0, 1]))

    @given(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6),
            min_size=2,
            max_size=30,
        ),
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6),
            min_size=2,
            max_size=30,
        ),
    )
    def test_attains_target_extremes_exactly(self, source, target):
        if max(source) <= min(source):
            return
        out = minmax_rescale(Series.of(source), Series.of(target))
        present = [v for v in out.values if v is not None]
        assert max(present) == max(target)
        assert min(present) == min(target)


class TestPanel:
    def test_clean_removes_all_gaps(self):
        panel = Panel(
            daily_dates(4),
            {"x": Series.of([1, None, None, 4]), "y": Series.of([0, 1, None, 3])},
        )
        cleaned = panel.clean()
        assert cleaned.column("x").values == (1.0, 2.0, 3.0, 4.0)
        assert cleaned.column("y").is_complete

    def test_duplicate_dates_rejected(self):
        with pytest.raises(DuplicateDate):
            Panel((date(2018, 1, 1), date(2018, 1, 1)), {})

    def test_column_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Panel(daily_dates(3), {"x": Series.of([1.0])})


class TestRollingWithGaps:
    def test_rolling_mean_skips_missing_cells(self):
        out = rolling_mean(Series.of([1.0, None, 3.0]), window=3, min_periods=2)
        assert out.values == (None, None, 2.0)

    def test_rolling_corr_uses_pairwise_complete_points(self):
        x = Series.of([1.0, 2.0, None, 4.0, 5.0])
        y = Series.of([2.0, 4.0, 0.0, 8.0, 10.0])
        out = rolling_corr(x, y, window=5, min_periods=3)
        assert out.values[-1] == pytest.approx(1.0, abs=1e-12)

import math

import numpy as np
import pytest

from leadrank import (
    DegenerateSeriesError,
    DuplicateKeyError,
    FirmRecord,
    ParseError,
    PricePanel,
    ValidationError,
    compute_log_returns,
    datasets,
    load_firm_csv,
    load_price_csv,
    save_firm_csv,
    save_price_csv,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadPriceCsv:
    def test_full_2x3_round_trip(self, tmp_path):
        p = write(tmp_path / "p.csv", "\n".join([
            "date,ticker,vwap",
            "2011-01-04,A,100.0",
            "2011-01-04,B,50.0",
            "2011-01-05,A,101.0",
            "2011-01-05,B,51.0",
            "2011-01-06,A,99.0",
            "2011-01-06,B,49.0",
        ]) + "\n")
        panel = load_price_csv(p)
        assert panel.tickers == ("A", "B")
        assert panel.dates == ("2011-01-04", "2011-01-05", "2011-01-06")
        assert int(np.isfinite(panel.prices).sum()) == 6
        assert panel.prices[0, 0] == 100.0 and panel.prices[1, 2] == 49.0

    def test_negative_price_is_parse_error_naming_line(self, tmp_path):
        p = write(tmp_path / "p.csv", "\n".join([
            "date,ticker,vwap",
            "2011-01-04,A,100.0",
            "2011-01-05,A,-1",
        ]) + "\n")
        with pytest.raises(ParseError, match="line 3"):
            load_price_csv(p)

    def test_union_alignment_leaves_missing_cell(self, tmp_path):
        p = write(tmp_path / "p.csv", "\n".join([
            "date,ticker,vwap",
            "2011-01-04,A,100.0",
            "2011-01-05,A,101.0",
            "2011-01-06,A,102.0",
            "2011-01-04,B,50.0",
            "2011-01-06,B,49.0",
        ]) + "\n")
        panel = load_price_csv(p)
        b = panel.tickers.index("B")
        assert np.isnan(panel.prices[b, 1])
        assert np.isfinite(panel.prices[b, [0, 2]]).all()

    def test_duplicate_key(self, tmp_path):
        p = write(tmp_path / "p.csv", "\n".join([
            "date,ticker,vwap",
            "2011-01-04,A,100.0",
            "2011-01-04,A,101.0",
        ]) + "\n")
        with pytest.raises(DuplicateKeyError, match="line 3"):
            load_price_csv(p)

    @pytest.mark.parametrize("body,msg", [
        ("date,ticker,price\n", "header"),
        ("date,ticker,vwap\n2011-01-04,A\n", "3 fields"),
        ("date,ticker,vwap\n2011-01-04,A,abc\n", "non-numeric"),
        ("date,ticker,vwap\n04/01/2011,A,5\n", "ISO-8601"),
        ("date,ticker,vwap\n2011-01-04,A,0\n", "> 0"),
        ("date,ticker,vwap\n", "no data"),
    ])
    def test_malformed_inputs(self, tmp_path, body, msg):
        with pytest.raises(ParseError, match=msg):
            load_price_csv(write(tmp_path / "p.csv", body))

    def test_single_observation_ticker_is_degenerate(self, tmp_path):
        p = write(tmp_path / "p.csv", "\n".join([
            "date,ticker,vwap",
            "2011-01-04,A,100.0",
            "2011-01-05,A,101.0",
            "2011-01-05,B,50.0",
        ]) + "\n")
        with pytest.raises(DegenerateSeriesError, match="'B'"):
            load_price_csv(p)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_save_load_round_trip(self, tmp_path, seed):
        gen = np.random.default_rng(seed)
        n, d = 4, 9
        prices = np.exp(gen.normal(4.0, 0.3, size=(n, d)))
        mask = gen.random((n, d)) < 0.25
        mask[:, 0] = False
        mask[:, -1] = False
        prices[mask] = np.nan
        panel = PricePanel(
            tickers=tuple(f"t{i}" for i in range(n)),
            dates=tuple(f"2011-02-{day:02d}" for day in range(1, d + 1)),
            prices=prices,
        )
        out = tmp_path / "round.csv"
        save_price_csv(panel, out)
        assert load_price_csv(out).equals(panel)


class TestPricePanelInvariants:
    def test_dates_must_increase(self):
        with pytest.raises(ValidationError, match="increasing"):
            PricePanel(("A",), ("2011-01-05", "2011-01-04"), [[1.0, 2.0]])

    def test_prices_positive(self):
        with pytest.raises(ValidationError, match="positive"):
            PricePanel(("A",), ("2011-01-04", "2011-01-05"), [[1.0, -2.0]])

    def test_grids_are_read_only(self):
        panel = PricePanel(("A",), ("2011-01-04", "2011-01-05"), [[1.0, 2.0]])
        with pytest.raises(ValueError):
            panel.prices[0, 0] = 9.9


class TestComputeLogReturns:
    def _panel(self, rows, tickers=None):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        tickers = tickers or tuple(f"t{i}" for i in range(rows.shape[0]))
        dates = tuple(f"2011-03-{d:02d}" for d in range(1, rows.shape[1] + 1))
        return PricePanel(tickers, dates, rows)

    def test_constant_prices_zero_returns(self):
        rp = compute_log_returns(self._panel([100.0, 100.0, 100.0]))
        assert np.array_equal(rp.returns, [[0.0, 0.0]])

    def test_doubling_gives_ln2(self):
        rp = compute_log_returns(self._panel([100.0, 200.0]))
        assert rp.returns[0, 0] == pytest.approx(math.log(2.0), abs=1e-15)

    def test_gap_bridging(self):
        rp = compute_log_returns(self._panel([100.0, np.nan, 110.0]))
        assert np.isnan(rp.returns[0, 0])
        assert rp.returns[0, 1] == pytest.approx(math.log(1.1), abs=1e-15)
        assert int(np.isfinite(rp.returns).sum()) == 1

    def test_period_axis_drops_first_date(self):
        panel = self._panel([100.0, 101.0, 102.0])
        rp = compute_log_returns(panel)
        assert rp.periods == panel.dates[1:]

    def test_return_count_matches_present_pairs(self, rng):
        prices = np.exp(rng.normal(4.0, 0.2, size=(3, 30)))
        halted = rng.random(prices.shape) < 0.3
        halted[:, :2] = False
        prices[halted] = np.nan
        rp = compute_log_returns(self._panel(prices))
        for i in range(3):
            n_present = int(np.isfinite(prices[i]).sum())
            assert int(np.isfinite(rp.returns[i]).sum()) == n_present - 1

    def test_scale_invariance(self, rng):
        prices = np.exp(rng.normal(4.0, 0.2, size=(2, 20)))
        base = compute_log_returns(self._panel(prices))
        scaled = compute_log_returns(self._panel(prices * 7.3))
        assert np.allclose(base.returns, scaled.returns, atol=1e-12, equal_nan=True)

    def test_returns_telescope(self, rng):
        prices = np.exp(rng.normal(4.0, 0.2, size=20))
        prices[[4, 11]] = np.nan
        rp = compute_log_returns(self._panel(prices))
        finite = np.isfinite(prices)
        total = math.fsum(rp.returns[0][np.isfinite(rp.returns[0])])
        expected = math.log(prices[finite][-1]) - math.log(prices[finite][0])
        assert total == pytest.approx(expected, abs=1e-12)


class TestFirmCsv:
    def test_reference_round_trip_preserves_order_and_values(self, tmp_path):
        firms = datasets.load_coal_firms()
        path = tmp_path / "firms.csv"
        save_firm_csv(firms, path)
        loaded = load_firm_csv(path)
        assert len(loaded) == 21
        assert [f.ticker for f in loaded] == [f.ticker for f in firms]
        lead = loaded[0]
        assert lead.ticker == "中国神华"
        assert lead.total_assets == 33926800.0
        assert lead.revenue == 1520630.0
        assert lead.net_profit == 3718700.0
        assert lead.total_profit == 5330400.0

    def test_zero_profit_rejected(self, tmp_path):
        p = tmp_path / "firms.csv"
        p.write_text(
            "ticker,total_assets,revenue,net_profit,total_profit\nX,1,1,0,1\n",
            encoding="utf-8",
        )
        with pytest.raises(ValidationError, match="net_profit"):
            load_firm_csv(p)

    def test_non_numeric_and_header_errors(self, tmp_path):
        p = tmp_path / "firms.csv"
        p.write_text("ticker,assets\n", encoding="utf-8")
        with pytest.raises(ParseError, match="header"):
            load_firm_csv(p)
        p.write_text(
            "ticker,total_assets,revenue,net_profit,total_profit\nX,a,1,1,1\n",
            encoding="utf-8",
        )
        with pytest.raises(ParseError, match="line 2"):
            load_firm_csv(p)

    def test_duplicate_ticker(self, tmp_path):
        p = tmp_path / "firms.csv"
        p.write_text(
            "ticker,total_assets,revenue,net_profit,total_profit\n"
            "X,1,1,1,1\nX,2,2,2,2\n",
            encoding="utf-8",
        )
        with pytest.raises(DuplicateKeyError):
            load_firm_csv(p)

    def test_record_validates_directly(self):
        with pytest.raises(ValidationError):
            FirmRecord("X", 1.0, -1.0, 1.0, 1.0)

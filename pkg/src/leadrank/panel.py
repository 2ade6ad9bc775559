"""Price and return panels: loading, validation, alignment, log returns.

The on-disk formats are small UTF-8 CSV files:

* ``prices.csv``: header ``date,ticker,vwap``, one row per observation.
  Dates are ISO-8601 (``YYYY-MM-DD``) strings; absent (date, ticker)
  pairs become missing cells.
* ``firms.csv``: header ``ticker,total_assets,revenue,net_profit,total_profit``
  with strictly positive amounts.

Panels keep a dense ticker-by-date grid with NaN for missing cells.
"""

import csv
import datetime
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSeriesError,
    DuplicateKeyError,
    ParseError,
    ValidationError,
)

PRICE_HEADER = ["date", "ticker", "vwap"]
FIRM_HEADER = ["ticker", "total_assets", "revenue", "net_profit", "total_profit"]
COVARIATES = ("total_assets", "revenue", "net_profit", "total_profit")


def _check_iso_date(label: str) -> str:
    try:
        datetime.date.fromisoformat(label)
    except ValueError:
        raise ValidationError(f"date label {label!r} is not ISO-8601 (YYYY-MM-DD)") from None
    return label


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Aligned per-ticker price series over trading days.

    ``prices`` has shape (n_tickers, n_dates); NaN marks a halted day.
    Dates are strictly increasing ISO strings; every present price is
    strictly positive and finite, and every ticker has at least two
    present observations.
    """

    tickers: tuple[str, ...]
    dates: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", _freeze(self.prices))
        if self.prices.shape != (len(self.tickers), len(self.dates)):
            raise ValidationError(
                f"price grid shape {self.prices.shape} does not match "
                f"{len(self.tickers)} tickers x {len(self.dates)} dates"
            )
        if len(set(self.tickers)) != len(self.tickers):
            raise ValidationError("duplicate tickers in panel")
        for d in self.dates:
            _check_iso_date(d)
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValidationError(f"dates not strictly increasing: {a!r} !< {b!r}")
        present = np.isfinite(self.prices)
        if np.any(self.prices[present] <= 0.0):
            raise ValidationError("present prices must be strictly positive")
        for i, t in enumerate(self.tickers):
            if int(present[i].sum()) < 2:
                raise DegenerateSeriesError(
                    f"ticker {t!r} has fewer than 2 present prices"
                )

    @property
    def n_tickers(self) -> int:
        return len(self.tickers)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    def equals(self, other: "PricePanel") -> bool:
        return (
            self.tickers == other.tickers
            and self.dates == other.dates
            and np.array_equal(self.prices, other.prices, equal_nan=True)
        )


@dataclass(frozen=True, eq=False)
class ReturnPanel:
    """Per-ticker log-return series on a shared period axis.

    ``returns`` has shape (n_tickers, n_periods); NaN marks a period on
    which the ticker has no return. All present values are finite.
    """

    tickers: tuple[str, ...]
    periods: tuple[str, ...]
    returns: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "periods", tuple(self.periods))
        object.__setattr__(self, "returns", _freeze(self.returns))
        if self.returns.shape != (len(self.tickers), len(self.periods)):
            raise ValidationError(
                f"return grid shape {self.returns.shape} does not match "
                f"{len(self.tickers)} tickers x {len(self.periods)} periods"
            )
        if len(set(self.tickers)) != len(self.tickers):
            raise ValidationError("duplicate tickers in panel")
        if np.any(np.isinf(self.returns)):
            raise ValidationError("returns contain infinite values")

    @property
    def n_tickers(self) -> int:
        return len(self.tickers)

    def select(self, indices) -> "ReturnPanel":
        """Sub-panel restricted to the given ticker indices (order kept)."""
        indices = list(indices)
        return ReturnPanel(
            tickers=tuple(self.tickers[i] for i in indices),
            periods=self.periods,
            returns=self.returns[indices, :],
        )

    def series(self, i: int) -> np.ndarray:
        """Ticker i's returns with missing periods dropped."""
        row = self.returns[i]
        return row[np.isfinite(row)]

    def equals(self, other: "ReturnPanel") -> bool:
        return (
            self.tickers == other.tickers
            and self.periods == other.periods
            and np.array_equal(self.returns, other.returns, equal_nan=True)
        )


@dataclass(frozen=True)
class FirmRecord:
    """Per-entity covariates, carried in the source unit (10^4 CNY).

    All four amounts must be strictly positive so that their logs exist.
    """

    ticker: str
    total_assets: float
    revenue: float
    net_profit: float
    total_profit: float

    def __post_init__(self):
        for name in COVARIATES:
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not np.isfinite(value) or value <= 0.0:
                raise ValidationError(
                    f"firm {self.ticker!r}: {name} must be strictly positive, got {value}"
                )

    def covariate(self, name: str) -> float:
        if name not in COVARIATES:
            raise ValidationError(f"unknown covariate {name!r}; choose from {COVARIATES}")
        return getattr(self, name)


def load_price_csv(path) -> PricePanel:
    """Load a ``date,ticker,vwap`` CSV into an aligned price panel.

    The date axis is the sorted union of observed dates; tickers are
    sorted; absent (date, ticker) pairs become missing cells.
    """
    cells: dict[tuple[str, str], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PRICE_HEADER:
            raise ParseError(f"expected header {','.join(PRICE_HEADER)!r}, got {header}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line=lineno)
            date, ticker, raw = row[0].strip(), row[1].strip(), row[2].strip()
            try:
                _check_iso_date(date)
            except ValidationError as e:
                raise ParseError(str(e), line=lineno) from None
            if not ticker:
                raise ParseError("empty ticker", line=lineno)
            try:
                price = float(raw)
            except ValueError:
                raise ParseError(f"non-numeric vwap {raw!r}", line=lineno) from None
            if not np.isfinite(price) or price <= 0.0:
                raise ParseError(f"vwap must be a finite value > 0, got {raw}", line=lineno)
            key = (date, ticker)
            if key in cells:
                raise DuplicateKeyError(f"duplicate (date, ticker) = {key}", line=lineno)
            cells[key] = price
    if not cells:
        raise ParseError("file contains no data rows")
    dates = tuple(sorted({d for d, _ in cells}))
    tickers = tuple(sorted({t for _, t in cells}))
    grid = np.full((len(tickers), len(dates)), np.nan)
    date_idx = {d: j for j, d in enumerate(dates)}
    ticker_idx = {t: i for i, t in enumerate(tickers)}
    for (d, t), p in cells.items():
        grid[ticker_idx[t], date_idx[d]] = p
    return PricePanel(tickers=tickers, dates=dates, prices=grid)


def save_price_csv(panel: PricePanel, path) -> None:
    """Write a panel back to ``date,ticker,vwap`` rows (full precision)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PRICE_HEADER)
        for j, d in enumerate(panel.dates):
            for i, t in enumerate(panel.tickers):
                p = panel.prices[i, j]
                if np.isfinite(p):
                    writer.writerow([d, t, repr(float(p))])


def compute_log_returns(panel: PricePanel) -> ReturnPanel:
    """Difference each ticker's log prices over its own present days.

    The return for a pair of consecutive present days lands on the later
    day's period, so halted days shrink a series instead of injecting
    missing values mid-pair. The period axis is the panel's date axis
    without its first day.
    """
    periods = panel.dates[1:]
    grid = np.full((panel.n_tickers, len(periods)), np.nan)
    for i, t in enumerate(panel.tickers):
        idx = np.flatnonzero(np.isfinite(panel.prices[i]))
        if idx.size < 2:
            raise DegenerateSeriesError(f"ticker {t!r} has fewer than 2 present prices")
        logs = np.log(panel.prices[i, idx])
        grid[i, idx[1:] - 1] = np.diff(logs)
    return ReturnPanel(tickers=panel.tickers, periods=periods, returns=grid)


def save_returns_csv(panel: ReturnPanel, path) -> None:
    """Write ``date,ticker,log_return`` rows for all present cells."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "ticker", "log_return"])
        for j, d in enumerate(panel.periods):
            for i, t in enumerate(panel.tickers):
                r = panel.returns[i, j]
                if np.isfinite(r):
                    writer.writerow([d, t, repr(float(r))])


def load_firm_csv(path) -> list[FirmRecord]:
    """Load firm covariates, one record per row, order preserved."""
    records: list[FirmRecord] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != FIRM_HEADER:
            raise ParseError(f"expected header {','.join(FIRM_HEADER)!r}, got {header}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise ParseError(f"expected 5 fields, got {len(row)}", line=lineno)
            ticker = row[0].strip()
            if not ticker:
                raise ParseError("empty ticker", line=lineno)
            if ticker in seen:
                raise DuplicateKeyError(f"duplicate ticker {ticker!r}", line=lineno)
            seen.add(ticker)
            values = []
            for name, raw in zip(COVARIATES, row[1:]):
                try:
                    values.append(float(raw))
                except ValueError:
                    raise ParseError(f"non-numeric {name} {raw.strip()!r}", line=lineno) from None
            try:
                records.append(FirmRecord(ticker, *values))
            except ValidationError as e:
                raise ValidationError(f"line {lineno}: {e}") from None
    if not records:
        raise ParseError("file contains no data rows")
    return records


def save_firm_csv(records, path) -> None:
    """Write firm records to the ``firms.csv`` format (full precision)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FIRM_HEADER)
        for rec in records:
            writer.writerow(
                [rec.ticker] + [repr(float(getattr(rec, c))) for c in COVARIATES]
            )

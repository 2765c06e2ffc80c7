"""Price-panel ingestion and the empirical effective-size pipelines.

File formats
------------
Price file: delimiter-separated text with a header row ``date,ASSET1,...``,
one row per trading day, ISO-8601 dates in strictly increasing order, and
positive decimal prices. An empty cell marks a missing quote; assets with any
missing quote are dropped (and reported) rather than imputed.

Sector file: two columns ``asset,sector`` with a header row.

All tabular output is tab-separated with a header row and floats rendered
with 10 significant digits, so reruns with identical inputs and seed are
byte-identical.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .corrmat import ReturnSeries, correlation_values, symmetric_inverse
from .effsize import SectorPartition, m_ef_even, m_ef_sector
from .errors import (
    DataError,
    DomainError,
    InputShapeError,
    NearSingularError,
    ParseError,
)

#: Annualization factor: trading days per year.
TRADING_DAYS_PER_YEAR = 252


@dataclass(frozen=True, eq=False)
class PricePanel:
    """Rectangular panel of adjusted closing prices.

    ``dropped_assets`` reports columns removed by the loader because of
    missing quotes.
    """

    dates: tuple[str, ...]
    assets: tuple[str, ...]
    prices: np.ndarray
    dropped_assets: tuple[str, ...] = ()

    def __post_init__(self):
        p = np.asarray(self.prices, dtype=float)
        if p.ndim != 2 or p.shape != (len(self.dates), len(self.assets)):
            raise InputShapeError(
                f"prices shape {p.shape} does not match "
                f"{len(self.dates)} dates x {len(self.assets)} assets"
            )
        if len(self.dates) < 1:
            raise InputShapeError("panel needs at least one date")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise DataError("dates must be strictly increasing")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise DataError("all prices must be positive and finite")
        p = np.array(p)
        p.flags.writeable = False
        object.__setattr__(self, "prices", p)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "assets", tuple(self.assets))

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_assets(self) -> int:
        return len(self.assets)


@dataclass(frozen=True)
class WindowSpec:
    """Sliding-window geometry: length and stride, in trading days."""

    length: int = TRADING_DAYS_PER_YEAR
    step: int = 1

    def __post_init__(self):
        if self.length < 30:
            raise DomainError(f"window length must be >= 30 trading days, got {self.length}")
        if self.step < 1:
            raise DomainError(f"window step must be >= 1, got {self.step}")


@dataclass(frozen=True)
class SubsetCurveSpec:
    """Random-subset experiment: portfolio sizes, draws per size, and seed."""

    sizes: tuple[int, ...]
    draws: int = 5000
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) < 1:
            raise DomainError("need at least one portfolio size")
        if any(s < 2 for s in sizes):
            raise DomainError(f"every portfolio size must be >= 2, got {sizes}")
        if self.draws < 1:
            raise DomainError(f"draws must be >= 1, got {self.draws}")
        object.__setattr__(self, "sizes", sizes)


class WindowPoint(NamedTuple):
    """One sliding-window result; m_ef is NaN for a near-singular window."""

    end_date: str
    m_ef: float
    annualized_return: float


class SubsetCurvePoint(NamedTuple):
    """Per-size averages over random subsets; NaN where not computable."""

    size: int
    m_exact: float
    m_sector: float
    m_even: float
    skipped: int


def _open_text(source):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", newline=""), True


def load_prices(source) -> PricePanel:
    """Load and validate a price panel from a CSV path or file object.

    Assets with any missing quote are dropped and listed in
    ``dropped_assets``; syntax problems raise ParseError with the line
    number, nonpositive prices raise DataError.
    """
    fh, owns = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        header = [h.strip() for h in header]
        if not header or header[0] != "date":
            raise ParseError("header must start with a 'date' column", line=1)
        assets = header[1:]
        if not assets:
            raise ParseError("header lists no asset columns", line=1)
        if len(set(assets)) != len(assets):
            raise ParseError("duplicate asset names in header", line=1)

        dates: list[str] = []
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, found {len(row)}", line=lineno
                )
            token = row[0].strip()
            try:
                datetime.date.fromisoformat(token)
            except ValueError:
                raise ParseError(f"invalid ISO-8601 date {token!r}", line=lineno) from None
            values = []
            for name, cell in zip(assets, row[1:]):
                cell = cell.strip()
                if cell == "":
                    values.append(np.nan)
                    continue
                try:
                    price = float(cell)
                except ValueError:
                    raise ParseError(
                        f"unparseable price {cell!r} for {name}", line=lineno
                    ) from None
                if not np.isfinite(price) or price <= 0.0:
                    raise DataError(f"line {lineno}: nonpositive price {cell} for {name}")
                values.append(price)
            dates.append(token)
            rows.append(values)
    finally:
        if owns:
            fh.close()

    if not rows:
        raise ParseError("file holds no data rows")
    prices = np.asarray(rows, dtype=float)
    complete = ~np.any(np.isnan(prices), axis=0)
    dropped = tuple(a for a, keep in zip(assets, complete) if not keep)
    kept = tuple(a for a, keep in zip(assets, complete) if keep)
    return PricePanel(
        dates=tuple(dates),
        assets=kept,
        prices=prices[:, complete],
        dropped_assets=dropped,
    )


def compute_returns(panel: PricePanel) -> list[ReturnSeries]:
    """Per-asset simple returns (w[t+1] - w[t]) / w[t], one series per asset."""
    if panel.n_dates < 2:
        raise InputShapeError("need at least 2 dates to compute returns")
    rets = np.diff(panel.prices, axis=0) / panel.prices[:-1]
    return [ReturnSeries(asset, rets[:, j]) for j, asset in enumerate(panel.assets)]


def _returns_matrix(panel: PricePanel) -> np.ndarray:
    if panel.n_dates < 2:
        raise InputShapeError("need at least 2 dates to compute returns")
    return np.diff(panel.prices, axis=0) / panel.prices[:-1]


def sliding_window_effsize(
    panel: PricePanel,
    window: WindowSpec,
    trading_days_per_year: int = TRADING_DAYS_PER_YEAR,
) -> list[WindowPoint]:
    """Time series of effective size and annualized mean return per window.

    Window k covers the prices at dates [k*step, k*step + length); the
    correlation matrix is estimated from the length-1 returns inside it.
    Near-singular windows yield a NaN gap marker instead of failing the run.
    """
    t = panel.n_dates
    if t < window.length:
        raise InputShapeError(
            f"panel spans {t} dates, shorter than the {window.length}-day window"
        )
    returns = _returns_matrix(panel)
    points: list[WindowPoint] = []
    n_windows = (t - window.length) // window.step + 1
    for k in range(n_windows):
        start = k * window.step
        chunk = returns[start : start + window.length - 1]
        corr = correlation_values(chunk)
        try:
            inv, _ = symmetric_inverse(corr)
            m_ef = float(np.sum(inv))
        except NearSingularError:
            m_ef = float("nan")
        annual = trading_days_per_year * float(chunk.mean())
        points.append(WindowPoint(panel.dates[start + window.length - 1], m_ef, annual))
    return points


def subset_curve(
    panel: PricePanel,
    spec: SubsetCurveSpec,
    partition: SectorPartition | None = None,
) -> list[SubsetCurvePoint]:
    """Average effective-size estimates over random subsets of each size.

    The correlation matrix is estimated once on the full panel; each draw
    selects a subset without replacement and evaluates the exact, sector, and
    average-correlation estimates on the corresponding sub-matrix. Singular
    sub-matrices are skipped and counted. Fixed (panel, spec, seed) gives
    identical output.
    """
    universe = panel.n_assets
    for size in spec.sizes:
        if size > universe:
            raise DomainError(
                f"portfolio size {size} exceeds the {universe}-asset universe"
            )
    if partition is not None:
        if set(partition.assignment.keys()) != set(range(universe)):
            raise InputShapeError("partition must cover every panel asset exactly once")
        labels = np.array([partition.assignment[i] for i in range(universe)])
    else:
        labels = None

    corr = correlation_values(_returns_matrix(panel))
    rng = np.random.default_rng(spec.seed)
    points: list[SubsetCurvePoint] = []
    for size in spec.sizes:
        exact_acc: list[float] = []
        sector_acc: list[float] = []
        even_acc: list[float] = []
        skipped = 0
        for _ in range(spec.draws):
            idx = np.sort(rng.choice(universe, size=size, replace=False))
            sub = corr[np.ix_(idx, idx)]
            try:
                inv, _ = symmetric_inverse(sub)
                exact = float(np.sum(inv))
                even = m_ef_even(sub)
                if labels is not None:
                    sector = m_ef_sector(sub, SectorPartition.from_labels(labels[idx]))
                else:
                    sector = float("nan")
            except (NearSingularError, DomainError):
                skipped += 1
                continue
            exact_acc.append(exact)
            sector_acc.append(sector)
            even_acc.append(even)
        points.append(
            SubsetCurvePoint(
                size=size,
                m_exact=float(np.mean(exact_acc)) if exact_acc else float("nan"),
                m_sector=float(np.mean(sector_acc)) if sector_acc else float("nan"),
                m_even=float(np.mean(even_acc)) if even_acc else float("nan"),
                skipped=skipped,
            )
        )
    return points


def load_sectors(source) -> dict[str, str]:
    """Load an asset-to-sector map from a two-column CSV with header."""
    fh, owns = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        if [h.strip() for h in header[:2]] != ["asset", "sector"]:
            raise ParseError("header must be 'asset,sector'", line=1)
        mapping: dict[str, str] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, found {len(row)}", line=lineno)
            asset, sector = row[0].strip(), row[1].strip()
            if not asset or not sector:
                raise ParseError("empty asset or sector name", line=lineno)
            if asset in mapping:
                raise ParseError(f"duplicate asset {asset!r}", line=lineno)
            mapping[asset] = sector
    finally:
        if owns:
            fh.close()
    if not mapping:
        raise ParseError("file holds no data rows")
    return mapping


def partition_for_panel(panel: PricePanel, sectors: dict[str, str]) -> SectorPartition:
    """Restrict an asset->sector map to a panel's assets, by panel index."""
    missing = [a for a in panel.assets if a not in sectors]
    if missing:
        raise InputShapeError(f"sector file misses assets: {', '.join(missing)}")
    return SectorPartition({i: sectors[a] for i, a in enumerate(panel.assets)})


def fmt_float(x: float) -> str:
    """Render a float with 10 significant digits (NaN as 'nan')."""
    return f"{float(x):.10g}"


def panel_from_returns(
    returns: np.ndarray,
    assets: Sequence[str] | None = None,
    base_price: float = 100.0,
    scale: float = 1.0,
    start: datetime.date = datetime.date(2000, 1, 3),
) -> PricePanel:
    """Build a synthetic price panel by compounding a (T, M) return matrix.

    Lets sampled return matrices (e.g. from the hidden-asset model) reuse the
    price-panel pipeline; ``scale`` shrinks unit-size returns to price-like
    magnitudes without touching their correlations. Dates are consecutive
    calendar days from ``start``.
    """
    r = np.asarray(returns, dtype=float) * scale
    if r.ndim != 2:
        raise InputShapeError(f"returns must be a (T, M) matrix, got shape {r.shape}")
    t, m = r.shape
    if assets is None:
        assets = [f"A{j + 1:03d}" for j in range(m)]
    if len(assets) != m:
        raise InputShapeError(f"{len(assets)} asset names for {m} columns")
    prices = np.empty((t + 1, m))
    prices[0] = base_price
    prices[1:] = base_price * np.cumprod(1.0 + r, axis=0)
    origin = start.toordinal()
    dates = tuple(
        datetime.date.fromordinal(origin + i).isoformat() for i in range(t + 1)
    )
    return PricePanel(dates=dates, assets=tuple(assets), prices=prices)


def write_prices_csv(panel: PricePanel, dest) -> None:
    """Write a panel in the loader's CSV format with 10-significant-digit prices."""
    fh, owns = (dest, False) if hasattr(dest, "write") else (open(dest, "w", newline="\n"), True)
    try:
        fh.write("date," + ",".join(panel.assets) + "\n")
        for i, date in enumerate(panel.dates):
            fh.write(date + "," + ",".join(fmt_float(v) for v in panel.prices[i]) + "\n")
    finally:
        if owns:
            fh.close()

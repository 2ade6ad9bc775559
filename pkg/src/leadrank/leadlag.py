"""Pairwise time-difference correlation analysis and lead-strength aggregation.

The central quantity is the lagged Pearson correlation between two equal
length series x and y: shift x forward by h periods and correlate the
overlap, i.e. correlate ``x[:-h]`` against ``y[h:]`` using the means of
those windows. A positive value at lag h says x anticipates y by h
periods. Per-pair lag profiles are aggregated into a single lead
strength, either as a flat mean over lags or as a mean weighted toward
the best lag, and the all-pairs strengths form a directed matrix.
"""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateVarianceError,
    InsufficientOverlapError,
    NoValidLagError,
    ValidationError,
)
from .panel import ReturnPanel
from .validation import as_series, check_choice, check_positive_int

SCHEMES = ("uniform", "weighted")
T0_MODES = ("signed", "abs")


def timediff_corr(x, y, lag: int) -> float:
    """Correlation of x shifted forward by ``lag`` periods against y.

    Pearson correlation of ``x[:n-lag]`` with ``y[lag:]`` over their
    overlap, each window centered on its own mean. Requires an overlap of
    at least 2 points and nonzero variance in both windows.
    """
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.size != y.size:
        raise ValidationError(f"series lengths differ: {x.size} != {y.size}")
    lag = check_positive_int("lag", lag)
    n = x.size
    if n - lag < 2:
        raise InsufficientOverlapError(
            f"lag {lag} leaves an overlap of {max(n - lag, 0)} < 2 points"
        )
    xs = x[: n - lag]
    ys = y[lag:]
    xc = xs - xs.mean()
    yc = ys - ys.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0:
        raise DegenerateVarianceError(f"x-window at lag {lag} has zero variance")
    if syy == 0.0:
        raise DegenerateVarianceError(f"y-window at lag {lag} has zero variance")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def lag_correlations(x, y, max_lag: int) -> dict[int, float]:
    """Full lag profile: ``{h: timediff_corr(x, y, h)}`` for h = 1..max_lag."""
    max_lag = check_positive_int("max_lag", max_lag)
    return {h: timediff_corr(x, y, h) for h in range(1, max_lag + 1)}


def best_lag(x, y, max_lag: int, mode: str = "abs") -> int:
    """Lag in 1..max_lag with the largest correlation.

    ``mode="abs"`` maximizes the magnitude, ``mode="signed"`` the raw
    value. Ties break toward the smallest lag. Lags whose windows are
    degenerate are skipped; if every lag is degenerate there is no
    answer and NoValidLagError is raised.
    """
    check_choice("mode", mode, T0_MODES)
    max_lag = check_positive_int("max_lag", max_lag)
    best_h = None
    best_key = -math.inf
    for h in range(1, max_lag + 1):
        try:
            r = timediff_corr(x, y, h)
        except DegenerateVarianceError:
            continue
        key = abs(r) if mode == "abs" else r
        if key > best_key:
            best_h, best_key = h, key
    if best_h is None:
        raise NoValidLagError(f"all lags 1..{max_lag} have degenerate windows")
    return best_h


def _aggregate_uniform(corrs: dict[int, float]) -> float:
    return math.fsum(corrs.values()) / len(corrs)


def _aggregate_weighted(corrs: dict[int, float], t0: int) -> float:
    weights = {h: 1.0 / (1.0 + abs(h - t0)) for h in corrs}
    total = math.fsum(weights.values())
    return math.fsum(corrs[h] * weights[h] for h in corrs) / total


def lead_strength_uniform(x, y, max_lag: int) -> float:
    """Arithmetic mean of the lag-1..max_lag correlations."""
    return _aggregate_uniform(lag_correlations(x, y, max_lag))


def lead_strength_weighted(x, y, max_lag: int, t0_mode: str = "signed") -> float:
    """Lag correlations averaged with weight 1/(1+|h - t0|).

    t0 is the best lag under ``t0_mode``; weights decay harmonically
    away from it and are normalized to sum to 1, so a flat profile is
    returned unchanged while a peaked one is pulled toward its peak.
    """
    corrs = lag_correlations(x, y, max_lag)
    t0 = best_lag(x, y, max_lag, mode=t0_mode)
    return _aggregate_weighted(corrs, t0)


def lead_strength(x, y, max_lag: int, scheme: str = "weighted",
                  t0_mode: str = "signed") -> float:
    """Dispatch to the uniform or weighted aggregator."""
    check_choice("scheme", scheme, SCHEMES)
    if scheme == "uniform":
        return lead_strength_uniform(x, y, max_lag)
    return lead_strength_weighted(x, y, max_lag, t0_mode=t0_mode)


@dataclass(frozen=True)
class LagProfile:
    """One ordered pair's lag analysis: profile, best lag, strength."""

    leader_idx: int
    follower_idx: int
    correlations: dict[int, float]
    best_lag: int
    strength: float

    def __post_init__(self):
        for h, r in self.correlations.items():
            if not -1.0 <= r <= 1.0:
                raise ValidationError(f"correlation at lag {h} outside [-1, 1]: {r}")
        if self.best_lag not in self.correlations:
            raise ValidationError(
                f"best_lag {self.best_lag} not among lags {sorted(self.correlations)}"
            )
        peak = max(abs(r) for r in self.correlations.values())
        if abs(self.strength) > peak + 1e-12:
            raise ValidationError(
                f"aggregated strength {self.strength} exceeds peak correlation {peak}"
            )


def lag_profile(x, y, max_lag: int, scheme: str = "weighted", t0_mode: str = "signed",
                leader_idx: int = 0, follower_idx: int = 1) -> LagProfile:
    """Analyze one ordered pair and package the result."""
    check_choice("scheme", scheme, SCHEMES)
    corrs = lag_correlations(x, y, max_lag)
    t0 = best_lag(x, y, max_lag, mode=t0_mode)
    if scheme == "uniform":
        strength = _aggregate_uniform(corrs)
    else:
        strength = _aggregate_weighted(corrs, t0)
    return LagProfile(
        leader_idx=leader_idx,
        follower_idx=follower_idx,
        correlations=corrs,
        best_lag=t0,
        strength=strength,
    )


@dataclass(frozen=True, eq=False)
class LeadStrengthMatrix:
    """Directed all-pairs lead strengths; entry (n, m) is n leading m."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        n = len(self.labels)
        if values.shape != (n, n):
            raise ValidationError(f"matrix shape {values.shape} does not match {n} labels")
        if not np.all(np.isfinite(values)):
            raise ValidationError("matrix contains non-finite entries")
        if np.any(np.diagonal(values) != 0.0):
            raise ValidationError("matrix diagonal must be zero")
        if np.any(np.abs(values) > 1.0 + 1e-12):
            raise ValidationError("matrix entries must lie in [-1, 1]")

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_csv(self, path) -> None:
        """Write ``leader,follower,strength`` rows for every ordered pair."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["leader", "follower", "strength"])
            for i, a in enumerate(self.labels):
                for j, b in enumerate(self.labels):
                    if i != j:
                        writer.writerow([a, b, repr(float(self.values[i, j]))])

    @classmethod
    def from_csv(cls, path) -> "LeadStrengthMatrix":
        rows: list[tuple[str, str, float]] = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["leader", "follower", "strength"]:
                raise ValidationError(f"unexpected header {header}")
            for row in reader:
                if row:
                    rows.append((row[0], row[1], float(row[2])))
        labels = tuple(sorted({a for a, _, _ in rows} | {b for _, b, _ in rows}))
        idx = {t: i for i, t in enumerate(labels)}
        values = np.zeros((len(labels), len(labels)))
        for a, b, v in rows:
            values[idx[a], idx[b]] = v
        return cls(labels=labels, values=values)

    def to_json(self, path) -> None:
        doc = {"labels": list(self.labels), "values": self.values.tolist()}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "LeadStrengthMatrix":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls(labels=tuple(doc["labels"]), values=np.asarray(doc["values"]))


def pairwise_matrix(panel: ReturnPanel, max_lag: int = 5, scheme: str = "weighted",
                    t0_mode: str = "signed") -> LeadStrengthMatrix:
    """Lead strength of every ordered ticker pair in the panel.

    Each pair is compared on the periods where both tickers have a
    return (pairwise deletion); the joint series must keep at least
    max_lag + 2 points. The result is directed and generally asymmetric,
    with a zero diagonal.
    """
    check_choice("scheme", scheme, SCHEMES)
    check_choice("t0_mode", t0_mode, T0_MODES)
    max_lag = check_positive_int("max_lag", max_lag)
    n = panel.n_tickers
    present = np.isfinite(panel.returns)
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            mask = present[i] & present[j]
            overlap = int(mask.sum())
            if overlap < max_lag + 2:
                raise InsufficientOverlapError(
                    f"pair ({panel.tickers[i]!r}, {panel.tickers[j]!r}): "
                    f"{overlap} joint periods, need >= {max_lag + 2}"
                )
            x = panel.returns[i, mask]
            y = panel.returns[j, mask]
            try:
                values[i, j] = lead_strength(x, y, max_lag, scheme=scheme, t0_mode=t0_mode)
            except (DegenerateVarianceError, NoValidLagError) as e:
                e.args = (
                    f"pair ({panel.tickers[i]!r}, {panel.tickers[j]!r}): {e.args[0]}",
                ) + e.args[1:]
                raise
    return LeadStrengthMatrix(labels=panel.tickers, values=values)

"""Simple OLS of scores on log firm covariates, and per-layer covariate means.

Classical simple regression: slope = cov(x, y) / var(x), residual
variance on n - 2 degrees of freedom, two-sided p-value from the
Student-t survival function evaluated through the regularized incomplete
beta function. No robust errors; the validation target reports classical
standard errors.
"""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DegenerateVarianceError, JoinError, ValidationError
from .panel import COVARIATES, FirmRecord
from .rank import LayerAssignment, ScoreVector
from .validation import as_series, check_choice

LOG_BASES = ("e", "10")


@dataclass(frozen=True)
class RegressionReport:
    """Simple-OLS summary for one covariate.

    ``alpha_hat`` is the intercept, ``beta_hat`` the slope; ``p_value``
    is two-sided on n - 2 degrees of freedom. ``x_mean``/``y_mean`` pin
    the centroid so the fitted line can be evaluated exactly through it.
    """

    covariate: str
    n_obs: int
    alpha_hat: float
    beta_hat: float
    se_beta: float
    t_stat: float
    p_value: float
    r_squared: float
    x_mean: float
    y_mean: float

    def __post_init__(self):
        if not 0.0 <= self.r_squared <= 1.0:
            raise ValidationError(f"r_squared outside [0, 1]: {self.r_squared}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p_value outside [0, 1]: {self.p_value}")
        if self.se_beta > 0.0 and math.isfinite(self.t_stat):
            if abs(self.t_stat - self.beta_hat / self.se_beta) > 1e-12 * max(1.0, abs(self.t_stat)):
                raise ValidationError("t_stat does not equal beta_hat / se_beta")

    def predict(self, x: float) -> float:
        """Fitted value, evaluated in centered form through the centroid."""
        return self.y_mean + self.beta_hat * (x - self.x_mean)

    def to_dict(self) -> dict:
        return {
            "covariate": self.covariate,
            "n_obs": self.n_obs,
            "beta": self.beta_hat,
            "se": self.se_beta,
            "t": self.t_stat,
            "p": self.p_value,
            "r2": self.r_squared,
            "intercept": self.alpha_hat,
        }


def student_t_p_value(t_stat: float, df: int) -> float:
    """Two-sided Student-t tail probability via the incomplete beta ratio."""
    if df < 1:
        raise ValidationError(f"degrees of freedom must be >= 1, got {df}")
    if math.isinf(t_stat):
        return 0.0
    if t_stat == 0.0:
        return 1.0
    t2 = t_stat * t_stat
    return float(special.betainc(df / 2.0, 0.5, df / (df + t2)))


def ols_simple(x, y, name: str = "x") -> RegressionReport:
    """Regress y on x with an intercept; classical errors, n >= 3."""
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.size != y.size:
        raise ValidationError(f"series lengths differ: {x.size} != {y.size}")
    n = x.size
    if n < 3:
        raise ValidationError(f"need at least 3 observations, got {n}")
    x_mean = float(x.mean())
    y_mean = float(y.mean())
    xc = x - x_mean
    yc = y - y_mean
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise DegenerateVarianceError("x has zero variance")
    beta = float(xc @ yc) / sxx
    alpha = y_mean - beta * x_mean
    resid = yc - beta * xc
    rss = float(resid @ resid)
    tss = float(yc @ yc)
    df = n - 2
    se_beta = math.sqrt((rss / df) / sxx)
    if se_beta == 0.0:
        t_stat = 0.0 if beta == 0.0 else math.copysign(math.inf, beta)
        p_value = 1.0 if beta == 0.0 else 0.0
    else:
        t_stat = beta / se_beta
        p_value = student_t_p_value(t_stat, df)
    r_squared = 0.0 if tss == 0.0 else min(1.0, max(0.0, 1.0 - rss / tss))
    return RegressionReport(
        covariate=name, n_obs=n, alpha_hat=alpha, beta_hat=beta, se_beta=se_beta,
        t_stat=t_stat, p_value=p_value, r_squared=r_squared,
        x_mean=x_mean, y_mean=y_mean,
    )


def score_vs_firm(scores: ScoreVector, firms, covariate: str,
                  log_base: str = "e") -> RegressionReport:
    """Regress scores on the log of one firm covariate.

    Tickers must match 1:1 between the score vector and the firm
    records. R-squared, t, and p do not depend on the log base; the
    slope under base 10 is the natural-log slope times ln(10).
    """
    check_choice("covariate", covariate, COVARIATES)
    check_choice("log_base", log_base, LOG_BASES)
    by_ticker: dict[str, FirmRecord] = {}
    for rec in firms:
        if rec.ticker in by_ticker:
            raise JoinError(f"duplicate firm record for {rec.ticker!r}")
        by_ticker[rec.ticker] = rec
    score_set = set(scores.labels)
    firm_set = set(by_ticker)
    if score_set != firm_set:
        missing_firms = sorted(score_set - firm_set)
        missing_scores = sorted(firm_set - score_set)
        raise JoinError(
            "tickers do not match 1:1: "
            f"no firm record for {missing_firms}, no score for {missing_scores}"
        )
    raw = np.array([by_ticker[t].covariate(covariate) for t in scores.labels])
    x = np.log(raw) if log_base == "e" else np.log10(raw)
    return ols_simple(x, scores.scores, name=covariate)


@dataclass(frozen=True)
class LayerMeans:
    """Arithmetic covariate means over one layer's members."""

    layer: int
    size: int
    total_assets: float
    revenue: float
    net_profit: float
    total_profit: float


@dataclass(frozen=True)
class LayerSummary:
    """Per-layer covariate means, one row per layer in extraction order."""

    rows: tuple[LayerMeans, ...]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["layer", "size"] + [f"mean_{c}" for c in COVARIATES])
            for row in self.rows:
                writer.writerow(
                    [row.layer, row.size]
                    + [repr(float(getattr(row, c))) for c in COVARIATES]
                )


def layer_averages(layers: LayerAssignment, firms) -> LayerSummary:
    """Mean of each covariate within each layer."""
    by_ticker = {rec.ticker: rec for rec in firms}
    missing = [t for t in layers.tickers() if t not in by_ticker]
    if missing:
        raise JoinError(f"no firm record for {sorted(missing)}")
    rows = []
    for k, layer in enumerate(layers.layers, start=1):
        means = {
            c: float(np.mean([by_ticker[t].covariate(c) for t in layer]))
            for c in COVARIATES
        }
        rows.append(LayerMeans(layer=k, size=len(layer), **means))
    return LayerSummary(rows=tuple(rows))


def write_regression_csv(reports, path) -> None:
    """Rows ``covariate,beta,se,t,p,r2`` mirroring the validation table."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["covariate", "beta", "se", "t", "p", "r2"])
        for rep in reports:
            writer.writerow([
                rep.covariate,
                repr(rep.beta_hat), repr(rep.se_beta), repr(rep.t_stat),
                repr(rep.p_value), repr(rep.r_squared),
            ])


def write_regression_json(reports, path, log_base: str | None = None) -> None:
    doc = {"regressions": [rep.to_dict() for rep in reports]}
    if log_base is not None:
        doc["log_base"] = log_base
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")

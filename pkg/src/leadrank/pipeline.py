"""End-to-end pipeline: ingest -> leadlag -> graph -> rank -> stats.

Runs every stage against a prices file (and optionally a firms file),
writes each stage's artifacts to a target directory, and records a
manifest with the configuration, input and output digests, and per-stage
timings. All artifacts are deterministic functions of inputs plus
configuration; the manifest's ``timings`` entry is the only field that
varies between identical runs.
"""

import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import LeadRankError, StageError, ValidationError
from .graph import LeadGraph, build_graph
from .leadlag import SCHEMES, T0_MODES, LeadStrengthMatrix, pairwise_matrix
from .panel import (
    COVARIATES,
    ReturnPanel,
    compute_log_returns,
    load_firm_csv,
    load_price_csv,
    save_returns_csv,
)
from .rank import LayerAssignment, ScoreVector, pagerank_iterative, stratify
from .stats import (
    LOG_BASES,
    LayerSummary,
    RegressionReport,
    layer_averages,
    score_vs_firm,
    write_regression_csv,
    write_regression_json,
)
from .validation import (
    check_choice,
    check_nonnegative,
    check_positive,
    check_positive_int,
    check_unit_open,
)

STAGES = ("ingest", "leadlag", "graph", "rank", "stats")

# external key -> (attribute, parser); "lambda" cannot be a Python name
_EXTERNAL_FIELDS = {
    "max_lag": ("max_lag", int),
    "scheme": ("scheme", str),
    "lambda": ("threshold", float),
    "alpha": ("alpha", float),
    "tol": ("tol", float),
    "max_iter": ("max_iter", int),
    "t0_mode": ("t0_mode", str),
    "log_base": ("log_base", str),
}


@dataclass(frozen=True)
class PipelineConfig:
    """Every tunable of the pipeline, with the standard defaults.

    Externally (config files, JSON documents, CLI flags) the edge
    threshold is spelled ``lambda``; the attribute is ``threshold``.
    """

    max_lag: int = 5
    scheme: str = "weighted"
    threshold: float = 0.1
    alpha: float = 0.85
    tol: float = 1e-10
    max_iter: int = 10000
    t0_mode: str = "signed"
    log_base: str = "e"

    def validate(self) -> "PipelineConfig":
        check_positive_int("max_lag", self.max_lag)
        check_choice("scheme", self.scheme, SCHEMES)
        check_nonnegative("lambda", self.threshold)
        check_unit_open("alpha", self.alpha)
        check_positive("tol", self.tol)
        check_positive_int("max_iter", self.max_iter)
        check_choice("t0_mode", self.t0_mode, T0_MODES)
        check_choice("log_base", self.log_base, LOG_BASES)
        return self

    def to_dict(self) -> dict:
        """External-key form, as written to config files and manifests."""
        out = {}
        for key, (attr, _) in _EXTERNAL_FIELDS.items():
            out[key] = getattr(self, attr)
        return out

    def with_external(self, mapping) -> "PipelineConfig":
        """Overlay external-key overrides; string values are parsed."""
        updates = {}
        for key, value in mapping.items():
            if key not in _EXTERNAL_FIELDS:
                raise ValidationError(
                    f"unknown configuration key {key!r}; known keys: "
                    f"{', '.join(_EXTERNAL_FIELDS)}"
                )
            attr, parse = _EXTERNAL_FIELDS[key]
            if isinstance(value, str) and parse is not str:
                try:
                    value = parse(value)
                except ValueError:
                    raise ValidationError(
                        f"configuration key {key!r}: cannot parse {value!r}"
                    ) from None
            updates[attr] = value
        return dataclasses.replace(self, **updates)


def parse_config_file(path) -> dict:
    """Flat ``key = value`` text; blank lines and ``#`` comments ignored."""
    pairs: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValidationError(f"config line {lineno}: expected 'key = value', got {line!r}")
            pairs[key.strip()] = value.strip()
    return pairs


def score_report(scores: ScoreVector, config: PipelineConfig) -> dict:
    """JSON-ready scoring report: parameters, convergence, and scores."""
    return {
        "alpha": config.alpha,
        "lambda": config.threshold,
        "max_lag": config.max_lag,
        "scheme": config.scheme,
        "t0_mode": config.t0_mode,
        "method": scores.method,
        "n_iter": scores.n_iter,
        "residual": scores.residual,
        "scores": scores.as_dict(),
    }


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_json(doc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


@dataclass
class PipelineResult:
    """Everything one run produced, plus the manifest that describes it."""

    returns: ReturnPanel
    matrix: LeadStrengthMatrix
    graph: LeadGraph
    scores: ScoreVector
    layers: LayerAssignment
    regressions: list[RegressionReport] | None
    layer_summary: LayerSummary | None
    manifest: dict
    out_dir: Path


def run_pipeline(prices_path, firms_path=None, config: PipelineConfig | None = None,
                 out_dir="leadrank_out") -> PipelineResult:
    """Run all five stages and write their artifacts under ``out_dir``.

    The stats stage is skipped (but still listed in the manifest) when no
    firms file is given. Any failure is re-raised as a StageError naming
    the stage, with the original error as its cause.
    """
    config = (config or PipelineConfig()).validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}
    stage_rows: list[dict] = []
    artifacts: list[str] = []

    def run_stage(name: str, fn):
        start = time.perf_counter()
        try:
            result = fn()
        except (LeadRankError, OSError) as e:
            raise StageError(name, e) from e
        timings[name] = time.perf_counter() - start
        stage_rows.append({"name": name, "status": "ok"})
        return result

    def ingest():
        panel = load_price_csv(prices_path)
        returns = compute_log_returns(panel)
        save_returns_csv(returns, out / "returns.csv")
        artifacts.append("returns.csv")
        return returns

    returns = run_stage("ingest", ingest)

    def leadlag():
        matrix = pairwise_matrix(returns, max_lag=config.max_lag,
                                 scheme=config.scheme, t0_mode=config.t0_mode)
        matrix.to_csv(out / "lead_matrix.csv")
        matrix.to_json(out / "lead_matrix.json")
        artifacts.extend(["lead_matrix.csv", "lead_matrix.json"])
        return matrix

    matrix = run_stage("leadlag", leadlag)

    def graph_stage():
        lead_graph = build_graph(matrix, cutoff=config.threshold)
        lead_graph.to_json(out / "graph.json")
        lead_graph.to_edge_csv(out / "edges.csv")
        artifacts.extend(["graph.json", "edges.csv"])
        return lead_graph

    lead_graph = run_stage("graph", graph_stage)

    def rank_stage():
        scores = pagerank_iterative(lead_graph, alpha=config.alpha, tol=config.tol,
                                    max_iter=config.max_iter)
        layers = stratify(returns, max_lag=config.max_lag, scheme=config.scheme,
                          threshold=config.threshold, alpha=config.alpha,
                          tol=config.tol, max_iter=config.max_iter,
                          t0_mode=config.t0_mode)
        scores.to_csv(out / "scores.csv")
        _write_json(score_report(scores, config), out / "scores.json")
        layers.to_json(out / "layers.json")
        layers.to_csv(out / "layers.csv")
        artifacts.extend(["scores.csv", "scores.json", "layers.json", "layers.csv"])
        return scores, layers

    scores, layers = run_stage("rank", rank_stage)

    regressions = None
    layer_summary = None
    if firms_path is None:
        stage_rows.append({"name": "stats", "status": "skipped"})
    else:
        def stats_stage():
            firms = load_firm_csv(firms_path)
            reports = [
                score_vs_firm(scores, firms, covariate, log_base=config.log_base)
                for covariate in COVARIATES
            ]
            summary = layer_averages(layers, firms)
            write_regression_csv(reports, out / "regressions.csv")
            write_regression_json(reports, out / "regressions.json",
                                  log_base=config.log_base)
            summary.to_csv(out / "layer_summary.csv")
            artifacts.extend(["regressions.csv", "regressions.json", "layer_summary.csv"])
            return reports, summary

        regressions, layer_summary = run_stage("stats", stats_stage)

    inputs = {"prices": {"file": Path(prices_path).name, "sha256": _sha256(prices_path)}}
    if firms_path is not None:
        inputs["firms"] = {"file": Path(firms_path).name, "sha256": _sha256(firms_path)}
    manifest = {
        "config": config.to_dict(),
        "inputs": inputs,
        "stages": stage_rows,
        "outputs": {name: _sha256(out / name) for name in artifacts},
        "rank": {"method": scores.method, "n_iter": scores.n_iter,
                 "residual": scores.residual, "n_layers": layers.n_layers},
        "timings": timings,
    }
    _write_json(manifest, out / "manifest.json")
    return PipelineResult(
        returns=returns, matrix=matrix, graph=lead_graph, scores=scores,
        layers=layers, regressions=regressions, layer_summary=layer_summary,
        manifest=manifest, out_dir=out,
    )

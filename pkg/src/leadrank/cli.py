"""Command-line driver.

Subcommands mirror the pipeline stages: ``returns``, ``matrix``,
``rank``, ``layers``, ``regress``, ``synth``, and ``pipeline``. Flag
values override config-file values, which override defaults. Exit codes:
0 success, 1 validation or parse error, 2 numerical non-convergence,
3 I/O error.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import LeadRankError, NumericalError, StageError, ValidationError
from .graph import build_graph
from .leadlag import SCHEMES, T0_MODES, pairwise_matrix
from .panel import (
    COVARIATES,
    compute_log_returns,
    load_firm_csv,
    load_price_csv,
    save_price_csv,
    save_returns_csv,
)
from .pipeline import PipelineConfig, parse_config_file, run_pipeline, score_report
from .rank import load_scores_csv, pagerank_closed, pagerank_iterative, stratify
from .stats import LOG_BASES, score_vs_firm, write_regression_csv, write_regression_json
from .synth import SynthSpec, generate_synthetic

_CONFIG_FLAG_MAP = (
    ("max_lag", "max_lag"),
    ("scheme", "scheme"),
    ("lambda", "lam"),
    ("alpha", "alpha"),
    ("tol", "tol"),
    ("max_iter", "max_iter"),
    ("t0_mode", "t0_mode"),
    ("log_base", "log_base"),
)


class _Parser(argparse.ArgumentParser):
    # usage problems are validation errors, exit code 1 (2 means non-convergence)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE",
                   help="flat 'key = value' configuration file")
    p.add_argument("--max-lag", type=int, dest="max_lag", metavar="H",
                   help="largest lead period per pair (default 5)")
    p.add_argument("--scheme", choices=SCHEMES,
                   help="lag aggregation scheme (default weighted)")
    p.add_argument("--lambda", type=float, dest="lam", metavar="X",
                   help="edge threshold on absolute lead strength (default 0.1)")
    p.add_argument("--alpha", type=float, metavar="A",
                   help="damping factor (default 0.85)")
    p.add_argument("--tol", type=float, metavar="T",
                   help="scoring convergence tolerance (default 1e-10)")
    p.add_argument("--max-iter", type=int, dest="max_iter", metavar="K",
                   help="scoring iteration budget (default 10000)")
    p.add_argument("--t0-mode", choices=T0_MODES, dest="t0_mode",
                   help="peak-lag rule for the weighted scheme (default signed)")
    p.add_argument("--log-base", choices=LOG_BASES, dest="log_base",
                   help="log base for covariate regressions (default e)")


def _config_from_args(args) -> PipelineConfig:
    cfg = PipelineConfig()
    if getattr(args, "config", None):
        cfg = cfg.with_external(parse_config_file(args.config))
    overrides = {}
    for external_key, attr in _CONFIG_FLAG_MAP:
        value = getattr(args, attr, None)
        if value is not None:
            overrides[external_key] = value
    return cfg.with_external(overrides).validate()


def _write_json(doc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def _returns_panel(args):
    return compute_log_returns(load_price_csv(args.prices))


def _cmd_returns(args) -> None:
    save_returns_csv(_returns_panel(args), args.out)
    print(f"wrote {args.out}")


def _cmd_matrix(args) -> None:
    cfg = _config_from_args(args)
    matrix = pairwise_matrix(_returns_panel(args), max_lag=cfg.max_lag,
                             scheme=cfg.scheme, t0_mode=cfg.t0_mode)
    matrix.to_csv(args.out)
    print(f"wrote {args.out}")
    if args.json:
        matrix.to_json(args.json)
        print(f"wrote {args.json}")


def _full_set_scores(returns, cfg: PipelineConfig, method: str):
    lead_graph = build_graph(
        pairwise_matrix(returns, max_lag=cfg.max_lag, scheme=cfg.scheme,
                        t0_mode=cfg.t0_mode),
        cutoff=cfg.threshold,
    )
    if method == "closed":
        return pagerank_closed(lead_graph, alpha=cfg.alpha)
    return pagerank_iterative(lead_graph, alpha=cfg.alpha, tol=cfg.tol,
                              max_iter=cfg.max_iter)


def _cmd_rank(args) -> None:
    cfg = _config_from_args(args)
    scores = _full_set_scores(_returns_panel(args), cfg, args.method)
    scores.to_csv(args.out)
    print(f"wrote {args.out}")
    if args.report:
        _write_json(score_report(scores, cfg), args.report)
        print(f"wrote {args.report}")


def _cmd_layers(args) -> None:
    cfg = _config_from_args(args)
    layers = stratify(_returns_panel(args), max_lag=cfg.max_lag, scheme=cfg.scheme,
                      threshold=cfg.threshold, alpha=cfg.alpha, tol=cfg.tol,
                      max_iter=cfg.max_iter, t0_mode=cfg.t0_mode)
    layers.to_json(args.out)
    print(f"wrote {args.out}")
    if args.csv:
        layers.to_csv(args.csv)
        print(f"wrote {args.csv}")


def _cmd_regress(args) -> None:
    cfg = _config_from_args(args)
    if args.scores:
        scores = load_scores_csv(args.scores)
    elif args.prices:
        scores = _full_set_scores(_returns_panel(args), cfg, "iterative")
    else:
        raise ValidationError("regress needs --scores or --prices")
    firms = load_firm_csv(args.firms)
    reports = [score_vs_firm(scores, firms, c, log_base=cfg.log_base)
               for c in COVARIATES]
    write_regression_csv(reports, args.out)
    print(f"wrote {args.out}")
    if args.json:
        write_regression_json(reports, args.json, log_base=cfg.log_base)
        print(f"wrote {args.json}")


def _cmd_synth(args) -> None:
    spec = SynthSpec(
        n_leaders=args.n_leaders,
        followers_per_leader=args.followers_per_leader,
        lags=tuple(int(s) for s in args.lags.split(",")) if args.lags else (),
        noise_sigma=args.noise_sigma,
        length=args.length,
        seed=args.seed,
        leader_sigma=args.leader_sigma,
    )
    panel, truth = generate_synthetic(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_price_csv(panel, out / "prices.csv")
    _write_json(truth, out / "truth.json")
    print(f"wrote {out / 'prices.csv'}")
    print(f"wrote {out / 'truth.json'}")


def _cmd_pipeline(args) -> None:
    cfg = _config_from_args(args)
    result = run_pipeline(args.prices, firms_path=args.firms, config=cfg,
                          out_dir=args.out_dir)
    for name in sorted(result.manifest["outputs"]):
        print(f"wrote {result.out_dir / name}")
    print(f"wrote {result.out_dir / 'manifest.json'}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leadrank",
                     description="Lead-lag discovery and ranking over return panels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("returns", parents=[], help="compute log returns from a price panel")
    p.add_argument("--prices", required=True, metavar="CSV")
    p.add_argument("--out", default="returns.csv", metavar="CSV")
    p.set_defaults(func=_cmd_returns)

    p = sub.add_parser("matrix", help="all-pairs lead-strength matrix")
    p.add_argument("--prices", required=True, metavar="CSV")
    p.add_argument("--out", default="lead_matrix.csv", metavar="CSV")
    p.add_argument("--json", metavar="JSON", help="also write the JSON matrix document")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("rank", help="damped scores on the full set")
    p.add_argument("--prices", required=True, metavar="CSV")
    p.add_argument("--out", default="scores.csv", metavar="CSV")
    p.add_argument("--report", metavar="JSON", help="also write the JSON score report")
    p.add_argument("--method", choices=("iterative", "closed"), default="iterative")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("layers", help="stratify the set into leader layers")
    p.add_argument("--prices", required=True, metavar="CSV")
    p.add_argument("--out", default="layers.json", metavar="JSON")
    p.add_argument("--csv", metavar="CSV", help="also write flat ticker,layer rows")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_layers)

    p = sub.add_parser("regress", help="regress scores on log firm covariates")
    p.add_argument("--firms", required=True, metavar="CSV")
    p.add_argument("--scores", metavar="CSV", help="ticker,score table to regress")
    p.add_argument("--prices", metavar="CSV", help="compute scores from prices instead")
    p.add_argument("--out", default="regressions.csv", metavar="CSV")
    p.add_argument("--json", metavar="JSON", help="also write the JSON report")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("synth", help="generate a synthetic leader/follower panel")
    p.add_argument("--out-dir", default="synth_out", dest="out_dir", metavar="DIR")
    p.add_argument("--n-leaders", type=int, default=1, dest="n_leaders")
    p.add_argument("--followers-per-leader", type=int, default=3,
                   dest="followers_per_leader")
    p.add_argument("--lags", default="1,2,3", metavar="H1,H2,...",
                   help="comma-separated lag per follower")
    p.add_argument("--noise-sigma", type=float, default=0.0, dest="noise_sigma")
    p.add_argument("--length", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--leader-sigma", type=float, default=0.02, dest="leader_sigma")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("pipeline", help="run every stage and write a manifest")
    p.add_argument("--prices", required=True, metavar="CSV")
    p.add_argument("--firms", metavar="CSV", help="firm covariates for the stats stage")
    p.add_argument("--out-dir", default="leadrank_out", dest="out_dir", metavar="DIR")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_code(e.cause)
    except (LeadRankError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return _exit_code(e)
    return 0


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, NumericalError):
        return 2
    if isinstance(exc, LeadRankError):
        return 1
    if isinstance(exc, OSError):
        return 3
    return 1


def app() -> None:
    raise SystemExit(main())

"""Lead-lag discovery in panels of time series.

Compute time-difference correlations between return series, aggregate
them into a directed lead-strength matrix, threshold it into a weighted
lead-graph, score nodes with a damped recursion, peel off leader layers,
and validate the scores against per-entity covariates with simple OLS.
"""

from . import datasets
from .errors import (
    DegenerateSeriesError,
    DegenerateVarianceError,
    DuplicateKeyError,
    InsufficientOverlapError,
    JoinError,
    LeadRankError,
    NonConvergenceError,
    NoValidLagError,
    NumericalError,
    ParseError,
    SolveError,
    StageError,
    ValidationError,
)
from .estimator import LeadLagStratifier
from .graph import LeadGraph, build_graph, column_normalize, threshold
from .leadlag import (
    LagProfile,
    LeadStrengthMatrix,
    best_lag,
    lag_correlations,
    lag_profile,
    lead_strength,
    lead_strength_uniform,
    lead_strength_weighted,
    pairwise_matrix,
    timediff_corr,
)
from .panel import (
    COVARIATES,
    FirmRecord,
    PricePanel,
    ReturnPanel,
    compute_log_returns,
    load_firm_csv,
    load_price_csv,
    save_firm_csv,
    save_price_csv,
    save_returns_csv,
)
from .pipeline import PipelineConfig, PipelineResult, parse_config_file, run_pipeline
from .rank import (
    LayerAssignment,
    ScoreVector,
    extract_leaders,
    load_scores_csv,
    pagerank_closed,
    pagerank_iterative,
    stratify,
)
from .stats import (
    LayerMeans,
    LayerSummary,
    RegressionReport,
    layer_averages,
    ols_simple,
    score_vs_firm,
    student_t_p_value,
)
from .synth import SynthSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "COVARIATES",
    "DegenerateSeriesError",
    "DegenerateVarianceError",
    "DuplicateKeyError",
    "FirmRecord",
    "InsufficientOverlapError",
    "JoinError",
    "LagProfile",
    "LayerAssignment",
    "LayerMeans",
    "LayerSummary",
    "LeadGraph",
    "LeadLagStratifier",
    "LeadRankError",
    "LeadStrengthMatrix",
    "NoValidLagError",
    "NonConvergenceError",
    "NumericalError",
    "ParseError",
    "PipelineConfig",
    "PipelineResult",
    "PricePanel",
    "RegressionReport",
    "ReturnPanel",
    "ScoreVector",
    "SolveError",
    "StageError",
    "SynthSpec",
    "ValidationError",
    "best_lag",
    "build_graph",
    "column_normalize",
    "compute_log_returns",
    "datasets",
    "extract_leaders",
    "generate_synthetic",
    "lag_correlations",
    "lag_profile",
    "layer_averages",
    "lead_strength",
    "lead_strength_uniform",
    "lead_strength_weighted",
    "load_firm_csv",
    "load_price_csv",
    "load_scores_csv",
    "ols_simple",
    "pagerank_closed",
    "pagerank_iterative",
    "pairwise_matrix",
    "parse_config_file",
    "run_pipeline",
    "save_firm_csv",
    "save_price_csv",
    "save_returns_csv",
    "score_vs_firm",
    "stratify",
    "student_t_p_value",
    "threshold",
    "timediff_corr",
]

"""Damped scoring, leader extraction, and layer-by-layer stratification.

Scores solve the damped fixed point

    s = (1 - alpha) * 1 + alpha * H @ s

where H is the column-normalized lead-weight matrix, so a node's score
is a teleport floor of (1 - alpha) plus a damped share of the scores of
everything it leads. Two routes are provided: power iteration from an
all-ones start, and the direct linear solve of (I - alpha H) s =
(1 - alpha) 1. With column sums at most 1 and alpha < 1 the spectral
radius of alpha H stays below 1, so both converge to the same vector.

Leaders are extracted by the sequential deletion rule: walk nodes in
descending score order and delete any node whose surviving, row-share
weighted inflow reaches its own score. Survivors form a layer; removing
a layer and recomputing everything on the residual panel stratifies the
whole set. Note the rule is sequential: deleting a node mid-pass can
save a downstream node whose only strong leader just got deleted.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    LeadRankError,
    NonConvergenceError,
    ParseError,
    SolveError,
    ValidationError,
)
from .graph import LeadGraph, build_graph
from .leadlag import SCHEMES, pairwise_matrix
from .panel import ReturnPanel
from .validation import (
    check_choice,
    check_positive,
    check_positive_int,
    check_unit_open,
)


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Per-node scores with the damping and method that produced them.

    When ``alpha`` is known every score is at least 1 - alpha (the
    teleport floor). ``alpha=None`` marks a score table loaded from disk
    or bundled as reference data, where no floor can be asserted.
    """

    labels: tuple[str, ...]
    scores: np.ndarray
    alpha: float | None
    method: str
    n_iter: int | None = None
    residual: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        scores = np.array(self.scores, dtype=np.float64)
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        if scores.shape != (len(self.labels),):
            raise ValidationError(
                f"score shape {scores.shape} does not match {len(self.labels)} labels"
            )
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("duplicate labels in score vector")
        if not np.all(np.isfinite(scores)):
            raise ValidationError("scores must be finite")
        if self.alpha is not None:
            alpha = check_unit_open("alpha", self.alpha)
            object.__setattr__(self, "alpha", alpha)
            if scores.size and float(scores.min()) < (1.0 - alpha) - 1e-9:
                raise ValidationError(
                    f"minimum score {scores.min()} under the teleport floor {1.0 - alpha}"
                )

    def as_dict(self) -> dict[str, float]:
        return {t: float(s) for t, s in zip(self.labels, self.scores)}

    def to_csv(self, path) -> None:
        """Write ``ticker,score`` rows at full precision."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["ticker", "score"])
            for t, s in zip(self.labels, self.scores):
                writer.writerow([t, repr(float(s))])


def load_scores_csv(path) -> ScoreVector:
    """Read a ``ticker,score`` table; provenance fields are unknown."""
    labels: list[str] = []
    values: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["ticker", "score"]:
            raise ParseError(f"expected header 'ticker,score', got {header}", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line=lineno)
            labels.append(row[0].strip())
            try:
                values.append(float(row[1]))
            except ValueError:
                raise ParseError(f"non-numeric score {row[1]!r}", line=lineno) from None
    if not labels:
        raise ParseError("file contains no data rows")
    return ScoreVector(labels=tuple(labels), scores=np.asarray(values),
                       alpha=None, method="loaded")


def _as_transition(H, labels):
    if isinstance(H, LeadGraph):
        if labels is None:
            labels = H.labels
        H = H.transition
    H = np.asarray(H, dtype=np.float64)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"expected a square transition matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)) or np.any(H < 0.0):
        raise ValidationError("transition entries must be finite and nonnegative")
    if H.size and float(H.sum(axis=0).max()) > 1.0 + 1e-9:
        raise ValidationError("transition columns must sum to at most 1")
    if labels is None:
        labels = tuple(str(i) for i in range(H.shape[0]))
    if len(labels) != H.shape[0]:
        raise ValidationError(f"{len(labels)} labels for a {H.shape[0]}-node matrix")
    return H, tuple(labels)


def pagerank_iterative(H, alpha: float = 0.85, tol: float = 1e-10,
                       max_iter: int = 10000, labels=None) -> ScoreVector:
    """Fixed point of s <- (1 - alpha) 1 + alpha H s by power iteration.

    Starts from all ones and stops when the max-norm step falls below
    ``tol``; the fixed point does not depend on the start. Raises
    NonConvergenceError, carrying the last iterate and residual, if
    ``max_iter`` steps are not enough.
    """
    H, labels = _as_transition(H, labels)
    alpha = check_unit_open("alpha", alpha)
    tol = check_positive("tol", tol)
    max_iter = check_positive_int("max_iter", max_iter)
    n = H.shape[0]
    if n == 0:
        return ScoreVector(labels=(), scores=np.empty(0), alpha=alpha,
                           method="iterative", n_iter=0, residual=0.0)
    s = np.ones(n)
    teleport = 1.0 - alpha
    residual = np.inf
    for k in range(1, max_iter + 1):
        s_next = teleport + alpha * (H @ s)
        residual = float(np.max(np.abs(s_next - s)))
        s = s_next
        if residual < tol:
            return ScoreVector(labels=labels, scores=s, alpha=alpha,
                               method="iterative", n_iter=k, residual=residual)
    raise NonConvergenceError(
        f"no convergence to tol={tol} within {max_iter} iterations "
        f"(last residual {residual})",
        last_scores=s, residual=residual, n_iter=max_iter,
    )


def pagerank_closed(H, alpha: float = 0.85, labels=None) -> ScoreVector:
    """Direct solve of (I - alpha H) s = (1 - alpha) 1."""
    H, labels = _as_transition(H, labels)
    alpha = check_unit_open("alpha", alpha)
    n = H.shape[0]
    if n == 0:
        return ScoreVector(labels=(), scores=np.empty(0), alpha=alpha, method="closed")
    system = np.eye(n) - alpha * H
    try:
        s = np.linalg.solve(system, np.full(n, 1.0 - alpha))
    except np.linalg.LinAlgError as e:
        raise SolveError(f"scoring system could not be solved: {e}") from e
    if not np.all(np.isfinite(s)):
        raise SolveError("scoring system produced non-finite values")
    return ScoreVector(labels=labels, scores=s, alpha=alpha, method="closed")


def extract_leaders(graph: LeadGraph, scores: ScoreVector) -> tuple[str, ...]:
    """Survivors of the sequential deletion rule, in graph label order.

    Nodes are visited in descending score order (ties by input order).
    A node is deleted when the inflow from still-undeleted nodes, each
    contributing its score times its row share of transition weight into
    the node, reaches the node's own score. A node with no out-edges
    contributes nothing (its row share is taken as 0).
    """
    if graph.labels != scores.labels:
        raise ValidationError("scores were not computed on this graph's labels")
    n = graph.n
    if n == 0:
        return ()
    H = graph.transition
    rowsums = H.sum(axis=1)
    shares = np.divide(H, rowsums[:, np.newaxis], out=np.zeros_like(H),
                       where=rowsums[:, np.newaxis] > 0.0)
    s = scores.scores
    order = sorted(range(n), key=lambda i: (-s[i], i))
    alive = np.ones(n, dtype=bool)
    for i in order:
        inflow = float((s * alive) @ shares[:, i])
        if inflow >= s[i]:
            alive[i] = False
    return tuple(label for label, keep in zip(graph.labels, alive) if keep)


@dataclass(frozen=True)
class LayerAssignment:
    """Ordered disjoint layers covering the whole ticker set.

    Layer 1 is the first leader set extracted; ``snapshots[k]`` holds the
    scores computed on the residual subset that produced layer k+1
    (empty for assignments loaded as reference data).
    """

    layers: tuple[tuple[str, ...], ...]
    snapshots: tuple[ScoreVector, ...] = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        seen: set[str] = set()
        for k, layer in enumerate(self.layers, start=1):
            if not layer:
                raise ValidationError(f"layer {k} is empty")
            overlap = seen.intersection(layer)
            if overlap:
                raise ValidationError(f"layers are not disjoint: {sorted(overlap)}")
            seen.update(layer)
        if self.snapshots and len(self.snapshots) != len(self.layers):
            raise ValidationError("one score snapshot per layer is required")

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def tickers(self) -> tuple[str, ...]:
        return tuple(t for layer in self.layers for t in layer)

    def layer_of(self) -> dict[str, int]:
        """Ticker to 1-based layer index."""
        return {t: k for k, layer in enumerate(self.layers, start=1) for t in layer}

    def to_json(self, path) -> None:
        doc = {"layers": [list(layer) for layer in self.layers], "params": self.params}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    def to_csv(self, path) -> None:
        """Flat ``ticker,layer`` rows, layer-major, 1-based layers."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["ticker", "layer"])
            for k, layer in enumerate(self.layers, start=1):
                for t in layer:
                    writer.writerow([t, k])


def stratify(panel: ReturnPanel, max_lag: int = 5, scheme: str = "weighted",
             threshold: float = 0.1, alpha: float = 0.85, tol: float = 1e-10,
             max_iter: int = 10000, t0_mode: str = "signed") -> LayerAssignment:
    """Peel leader sets off the panel until every ticker has a layer.

    Each round recomputes the pairwise strengths, graph, and scores on
    the residual subset from scratch, extracts the leaders as the next
    layer, and removes them. Any upstream error is annotated with the
    1-based index of the layer being computed.
    """
    check_choice("scheme", scheme, SCHEMES)
    remaining = list(range(panel.n_tickers))
    layers: list[tuple[str, ...]] = []
    snapshots: list[ScoreVector] = []
    layer_idx = 0
    while remaining:
        layer_idx += 1
        try:
            sub = panel.select(remaining)
            matrix = pairwise_matrix(sub, max_lag=max_lag, scheme=scheme, t0_mode=t0_mode)
            lead_graph = build_graph(matrix, cutoff=threshold)
            scores = pagerank_iterative(lead_graph, alpha=alpha, tol=tol,
                                        max_iter=max_iter, labels=lead_graph.labels)
            leaders = extract_leaders(lead_graph, scores)
        except LeadRankError as e:
            if e.args:
                e.args = (f"layer {layer_idx}: {e.args[0]}",) + e.args[1:]
            raise
        layers.append(leaders)
        snapshots.append(scores)
        leader_set = set(leaders)
        remaining = [i for i in remaining if panel.tickers[i] not in leader_set]
    params = {
        "max_lag": max_lag,
        "scheme": scheme,
        "lambda": threshold,
        "alpha": alpha,
        "tol": tol,
        "max_iter": max_iter,
        "t0_mode": t0_mode,
    }
    return LayerAssignment(layers=tuple(layers), snapshots=tuple(snapshots), params=params)

"""Thresholded weighted lead-graph and its column-normalized transition matrix.

An edge n -> m carries the absolute lead strength of n over m when that
magnitude strictly exceeds the threshold; weaker relations are dropped.
Two-way edges are allowed. Columns of the weight matrix are normalized
to sum to 1; a node nobody leads keeps an all-zero column (no uniform
fill), which keeps the damped scoring iteration contractive.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .leadlag import LeadStrengthMatrix
from .validation import check_nonnegative

_COLSUM_TOL = 1e-12


def threshold(matrix, cutoff: float) -> np.ndarray:
    """Gate absolute strengths at ``> cutoff``; zero diagonal, zero elsewhere."""
    cutoff = check_nonnegative("cutoff", cutoff)
    values = matrix.values if isinstance(matrix, LeadStrengthMatrix) else np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {values.shape}")
    magnitudes = np.abs(values)
    W = np.where(magnitudes > cutoff, magnitudes, 0.0)
    np.fill_diagonal(W, 0.0)
    return W


def column_normalize(W) -> np.ndarray:
    """Divide each column by its sum; all-zero columns stay all-zero."""
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {W.shape}")
    if np.any(W < 0.0) or not np.all(np.isfinite(W)):
        raise ValidationError("weights must be finite and nonnegative")
    colsums = W.sum(axis=0)
    H = np.divide(W, colsums[np.newaxis, :], out=np.zeros_like(W), where=colsums > 0.0)
    return H


@dataclass(frozen=True, eq=False)
class LeadGraph:
    """Weighted directed lead-graph: weights W, transitions H, threshold."""

    labels: tuple[str, ...]
    weights: np.ndarray
    transition: np.ndarray
    threshold: float

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        W = np.array(self.weights, dtype=np.float64)
        H = np.array(self.transition, dtype=np.float64)
        W.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "transition", H)
        object.__setattr__(self, "threshold", float(self.threshold))
        n = len(self.labels)
        if W.shape != (n, n) or H.shape != (n, n):
            raise ValidationError(
                f"weight/transition shapes {W.shape}/{H.shape} do not match {n} labels"
            )
        if np.any(np.diagonal(W) != 0.0):
            raise ValidationError("weight diagonal must be zero")
        nonzero = W > 0.0
        if np.any((W[nonzero] <= self.threshold) | (W[nonzero] > 1.0 + 1e-12)):
            raise ValidationError(
                f"nonzero weights must lie in ({self.threshold}, 1]"
            )
        if np.any(W < 0.0) or not np.all(np.isfinite(W)):
            raise ValidationError("weights must be finite and nonnegative")
        colsums = H.sum(axis=0)
        bad = ~(np.isclose(colsums, 1.0, rtol=0.0, atol=_COLSUM_TOL) | (colsums == 0.0))
        if np.any(bad):
            raise ValidationError("transition columns must sum to 1 or be all-zero")
        if np.any((H > 0.0) != nonzero):
            raise ValidationError("transition sparsity must match weight sparsity")

    @property
    def n(self) -> int:
        return len(self.labels)

    def edges(self) -> list[tuple[str, str, float]]:
        """Nonzero edges as (from, to, weight), row-major order."""
        out = []
        for i, a in enumerate(self.labels):
            for j, b in enumerate(self.labels):
                w = float(self.weights[i, j])
                if w > 0.0:
                    out.append((a, b, w))
        return out

    def to_json(self, path) -> None:
        doc = {
            "labels": list(self.labels),
            "lambda": self.threshold,
            "W": self.weights.tolist(),
            "H": self.transition.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def from_json(cls, path) -> "LeadGraph":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls(
            labels=tuple(doc["labels"]),
            weights=np.asarray(doc["W"]),
            transition=np.asarray(doc["H"]),
            threshold=doc["lambda"],
        )

    def to_edge_csv(self, path) -> None:
        """Edge list ``from,to,weight`` for external graph tooling."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["from", "to", "weight"])
            for a, b, w in self.edges():
                writer.writerow([a, b, repr(w)])


def build_graph(matrix: LeadStrengthMatrix, cutoff: float = 0.1) -> LeadGraph:
    """Threshold a strength matrix and column-normalize it into a graph."""
    W = threshold(matrix, cutoff)
    H = column_normalize(W)
    return LeadGraph(labels=matrix.labels, weights=W, transition=H, threshold=cutoff)

"""Input validation helpers shared by the functional API and the estimator."""

import numpy as np

from .errors import ValidationError


def as_series(x, name: str = "series") -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array with no missing or infinite values."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


def as_return_matrix(X, name: str = "X"):
    """Coerce ``X`` to a (n_series, n_periods) float64 array.

    NaN marks a missing observation and is allowed; infinities are not.
    Returns ``(labels, array)`` where labels come from a ``columns`` or
    ``index`` attribute when present (row-oriented input is expected, so
    an ``index`` attribute labels the series).
    """
    labels = None
    if hasattr(X, "index") and hasattr(X, "values"):
        labels = [str(v) for v in X.index]
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValidationError(f"{name} has no rows")
    if np.any(np.isinf(arr)):
        raise ValidationError(f"{name} contains infinite values")
    if labels is not None and len(labels) != arr.shape[0]:
        labels = None
    return labels, arr


def check_choice(name: str, value: str, options: tuple[str, ...]) -> str:
    if value not in options:
        raise ValidationError(f"{name} must be one of {options}, got {value!r}")
    return value


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_unit_open(name: str, value) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ValidationError(f"{name} must lie strictly between 0 and 1, got {value}")
    return value


def check_nonnegative(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0:
        raise ValidationError(f"{name} must be a finite value >= 0, got {value}")
    return value


def check_positive(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be a finite value > 0, got {value}")
    return value

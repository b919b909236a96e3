"""Input validation helpers used by the estimators and functional API."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import LengthMismatch, NonFiniteInput


def check_finite(values, what="input"):
    if not np.all(np.isfinite(values)):
        raise NonFiniteInput(f"{what} contains NaN or infinite values")
    return values


def check_series(x, min_length=1, what="series"):
    """Return ``x`` as a finite 1-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] < min_length:
        raise ValueError(f"{what} needs at least {min_length} values, got {arr.shape[0]}")
    return check_finite(arr, what)


def check_series_matrix(X, what="X"):
    """Return ``X`` as a finite (n_series, length) float64 array.

    A ragged list of sequences is rejected with :class:`LengthMismatch`.
    """
    if not isinstance(X, np.ndarray):
        rows = list(X)
        lengths = {len(r) for r in rows}
        if len(lengths) > 1:
            raise LengthMismatch(f"{what} holds series of different lengths: {sorted(lengths)}")
        X = rows
    X = check_array(X, dtype=np.float64, ensure_all_finite=False)
    return check_finite(X, what)


def check_same_length(a, b):
    if a.shape != b.shape:
        raise LengthMismatch(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")

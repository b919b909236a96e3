"""Z-normalization of univariate series."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_series, check_series_matrix

__all__ = ["ZNormedSeries", "z_normalize", "ZNormalizer"]


@dataclass(frozen=True)
class ZNormedSeries:
    values: np.ndarray
    source_index: int = 0


def _znorm_rows(X):
    mu = X.mean(axis=1, keepdims=True)
    sigma = X.std(axis=1, keepdims=True)  # population std (ddof=0)
    # exact constancy test; the float mean of equal values can miss them by an ulp
    varying = np.ptp(X, axis=1, keepdims=True) > 0
    out = np.zeros_like(X)
    np.divide(X - mu, sigma, out=out, where=varying & (sigma > 0))
    return out


def z_normalize(series, source_index=0):
    """Rescale ``series`` to zero mean and unit population standard deviation.

    A constant series has no spread to divide by and maps to all zeros.
    """
    x = check_series(series)
    return ZNormedSeries(values=_znorm_rows(x[None, :])[0], source_index=source_index)


class ZNormalizer(TransformerMixin, BaseEstimator):
    """Per-series z-normalization as a stateless scikit-learn transformer.

    Each row of ``X`` is normalized independently, so ``fit`` only records
    the expected series length.
    """

    def fit(self, X, y=None):
        X = check_series_matrix(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_series_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} time points, expected {self.n_features_in_}"
            )
        return _znorm_rows(X)

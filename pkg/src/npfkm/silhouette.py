"""Silhouette scores computed on raw series.

Cluster labels may come from any representation (RMSE series, z-scores),
but distances are always measured between the raw series they stand for.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_series_matrix
from .exceptions import LengthMismatch, SingleCluster

__all__ = [
    "SilhouetteReport",
    "pairwise_euclidean",
    "silhouette_sample",
    "silhouette_overall",
    "write_silhouette_csv",
]


@dataclass(frozen=True)
class SilhouetteReport:
    per_series: np.ndarray
    overall: float


def pairwise_euclidean(X):
    """Symmetric (n, n) table of Euclidean distances with an exact zero diagonal."""
    X = check_series_matrix(X)
    n = X.shape[0]
    D = np.empty((n, n))
    for i in range(n):
        diff = X - X[i]
        D[i] = np.sqrt(np.einsum("nl,nl->n", diff, diff))
    return D


def _check_labels(labels, n):
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise LengthMismatch(f"expected {n} labels, got {labels.shape[0]}")
    if np.unique(labels).size < 2:
        raise SingleCluster("silhouette needs at least two clusters")
    return labels


def silhouette_sample(i, labels, dist):
    """Silhouette of series ``i`` given a precomputed distance table.

    A series alone in its cluster scores 0.
    """
    dist = np.asarray(dist, dtype=np.float64)
    labels = _check_labels(labels, dist.shape[0])
    own = labels == labels[i]
    if own.sum() == 1:
        return 0.0
    a = dist[i, own].sum() / (own.sum() - 1)  # dist[i, i] is 0
    b = min(dist[i, labels == lab].mean() for lab in np.unique(labels) if lab != labels[i])
    denom = max(a, b)
    return 0.0 if denom == 0.0 else float((b - a) / denom)


def silhouette_overall(raw_series, labels):
    dist = pairwise_euclidean(raw_series)
    labels = _check_labels(labels, dist.shape[0])
    per = np.array([silhouette_sample(i, labels, dist) for i in range(len(labels))])
    return SilhouetteReport(per_series=per, overall=float(per.mean()))


def write_silhouette_csv(path, labels, report):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("series_no,cluster_id,silhouette\n")
        for i, (lab, s) in enumerate(zip(labels, report.per_series), start=1):
            fh.write(f"{i},{int(lab)},{s:.6f}\n")
        fh.write(f"overall,{report.overall:.6f}\n")

"""Lloyd's k-means for equal-length series under Euclidean distance.

Initial centroids are copies of chosen series, picked by index. Two
pipelines that cluster different representations of the same series can
therefore start from the same series.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_same_length, check_series, check_series_matrix
from .exceptions import KTooLarge, LengthMismatch

__all__ = [
    "ClusteringConfig",
    "ClusteringResult",
    "euclidean",
    "select_initial_centroids",
    "kmeans",
    "write_labels_csv",
    "TimeSeriesKMeans",
]


@dataclass(frozen=True)
class ClusteringConfig:
    k: int
    init_indices: tuple
    max_iterations: int = 100
    tolerance: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "init_indices", tuple(int(i) for i in self.init_indices))
        if self.k < 1:
            raise KTooLarge(f"k must be positive, got {self.k}")
        if len(self.init_indices) != self.k:
            raise ValueError(f"need {self.k} initial indices, got {len(self.init_indices)}")
        if len(set(self.init_indices)) != self.k:
            raise ValueError("initial indices must be distinct")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    inertia_trace: tuple = ()


def euclidean(a, b):
    a = check_series(a, what="a")
    b = check_series(b, what="b")
    check_same_length(a, b)
    d = a - b
    return math.sqrt(float(np.dot(d, d)))


def select_initial_centroids(n, k, seed=1):
    """Draw ``k`` distinct series indices out of ``n`` with a seeded generator."""
    if k < 1 or k > n:
        raise KTooLarge(f"k must satisfy 1 <= k <= n={n}, got {k}")
    rng = np.random.default_rng(seed)
    return tuple(int(i) for i in rng.choice(n, size=k, replace=False))


def _sq_distances(X, centroids):
    # one independent reduction per (series, centroid) pair
    diff = X[:, None, :] - centroids[None, :, :]
    return np.einsum("nkl,nkl->nk", diff, diff)


def _repair_empty(labels, dists, k):
    """Give each empty cluster the series farthest from its own centroid."""
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        own = dists[np.arange(len(labels)), labels].copy()
        own[counts[labels] <= 1] = -np.inf  # never empty another cluster
        donor = int(np.argmax(own))
        counts[labels[donor]] -= 1
        labels[donor] = j
        counts[j] = 1
        dists[donor, j] = 0.0
    return labels


def kmeans(series, cfg):
    """Run Lloyd iterations from the centroids at ``cfg.init_indices``.

    Each iteration assigns every series to its nearest centroid (ties go to
    the lowest cluster id) and moves each centroid to the mean of its
    members. Iteration stops when the inertia stops changing by more than
    ``cfg.tolerance`` (relative) or after ``cfg.max_iterations`` passes.
    """
    X = check_series_matrix(series, "series")
    n = X.shape[0]
    if cfg.k > n:
        raise KTooLarge(f"k={cfg.k} exceeds the number of series ({n})")
    if max(cfg.init_indices) >= n or min(cfg.init_indices) < 0:
        raise ValueError(f"initial indices must lie in [0, {n})")

    centroids = X[list(cfg.init_indices)].copy()
    trace = []
    labels = None
    converged = False
    for iteration in range(1, cfg.max_iterations + 1):
        dists = _sq_distances(X, centroids)
        labels = np.argmin(dists, axis=1)
        labels = _repair_empty(labels, dists, cfg.k)
        for j in range(cfg.k):
            centroids[j] = X[labels == j].mean(axis=0)
        inertia = float(np.sum((X - centroids[labels]) ** 2))
        prev = trace[-1] if trace else None
        trace.append(inertia)
        if inertia == 0.0 or (prev is not None and prev - inertia <= cfg.tolerance * prev):
            converged = True
            break

    return ClusteringResult(
        labels=labels, centroids=centroids, inertia=trace[-1],
        iterations=iteration, converged=converged, inertia_trace=tuple(trace),
    )


def write_labels_csv(path, labels):
    """One row per series, numbered from 1."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("series_no,cluster_id\n")
        for i, lab in enumerate(labels, start=1):
            fh.write(f"{i},{int(lab)}\n")


class TimeSeriesKMeans(ClusterMixin, BaseEstimator):
    """k-means over rows of ``X``, each row a series.

    Parameters
    ----------
    n_clusters : int, default=8
    init : "random" or array-like of int, default="random"
        Either explicit series indices used as initial centroids, or
        "random" to draw them with ``random_state``.
    random_state : int, default=1
    max_iter : int, default=100
    tol : float, default=1e-6
        Relative inertia change below which iteration stops.

    Attributes
    ----------
    labels_, cluster_centers_, inertia_, n_iter_, converged_,
    inertia_trace_, init_indices_
    """

    def __init__(self, n_clusters=8, init="random", random_state=1, max_iter=100, tol=1e-6):
        self.n_clusters = n_clusters
        self.init = init
        self.random_state = random_state
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        X = check_series_matrix(X)
        if isinstance(self.init, str):
            if self.init != "random":
                raise ValueError(f"unknown init {self.init!r}")
            indices = select_initial_centroids(X.shape[0], self.n_clusters, self.random_state)
        else:
            indices = tuple(int(i) for i in self.init)
        cfg = ClusteringConfig(
            k=self.n_clusters, init_indices=indices,
            max_iterations=self.max_iter, tolerance=self.tol,
        )
        res = kmeans(X, cfg)
        self.init_indices_ = cfg.init_indices
        self.labels_ = res.labels
        self.cluster_centers_ = res.centroids
        self.inertia_ = res.inertia
        self.n_iter_ = res.iterations
        self.converged_ = res.converged
        self.inertia_trace_ = res.inertia_trace
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "cluster_centers_")
        X = check_series_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise LengthMismatch(f"X has {X.shape[1]} time points, expected {self.n_features_in_}")
        return np.argmin(_sq_distances(X, self.cluster_centers_), axis=1)

"""k-means time-series clustering with z-normalization and NP-Free front-ends."""

from .dataset_io import Dataset, LabeledRecord, load_dataset, parse_record, render_record
from .kmeans import ClusteringConfig, TimeSeriesKMeans, euclidean, kmeans, select_initial_centroids
from .lstm import LstmHyperparams, LstmModel
from .npfree import NPFreeTransformer, convert, rmse_window, threshold
from .silhouette import silhouette_overall, silhouette_sample
from .znorm import ZNormalizer, z_normalize

__version__ = "0.1.0"

__all__ = [
    "ClusteringConfig",
    "Dataset",
    "LabeledRecord",
    "LstmHyperparams",
    "LstmModel",
    "NPFreeTransformer",
    "TimeSeriesKMeans",
    "ZNormalizer",
    "convert",
    "euclidean",
    "kmeans",
    "load_dataset",
    "parse_record",
    "render_record",
    "rmse_window",
    "select_initial_centroids",
    "silhouette_overall",
    "silhouette_sample",
    "threshold",
    "z_normalize",
]

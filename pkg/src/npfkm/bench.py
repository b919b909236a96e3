"""Experiment runner comparing NP-Free and z-normalization front-ends for k-means.

For every k, both pipelines start from the same series indices. Each
clustering is then scored by silhouette on the raw series, so neither
representation scores itself.
"""

import csv
import logging
import math
import time
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from . import lstm
from ._parallel import ordered_map, resolve_threads
from .dataset_io import load_dataset
from .exceptions import KTooLarge, ReportWriteFailure
from .kmeans import ClusteringConfig, kmeans, select_initial_centroids, write_labels_csv
from .npfree import DEFAULT_W, RmseSeries, convert, write_rmse_csv
from .silhouette import SilhouetteReport, silhouette_overall, write_silhouette_csv
from .znorm import z_normalize

log = logging.getLogger(__name__)

METHODS = ("npfree", "znorm")
DEFAULT_K_LIST = (13, 14, 15, 17, 19, 20, 21, 22, 26, 28, 29, 33)
REPORT_HEADER = (
    "method", "k", "silhouette", "inertia", "iterations",
    "preprocess_mean_s", "preprocess_std_s",
)


@dataclass
class ExperimentConfig:
    input: Path
    class_filter: int = None
    k_list: tuple = DEFAULT_K_LIST
    seed: int = 1
    w: int = DEFAULT_W
    hyperparams: lstm.LstmHyperparams = field(default_factory=lstm.LstmHyperparams)
    out_dir: Path = Path("out")
    threads: int = None

    def __post_init__(self):
        self.input = Path(self.input)
        self.out_dir = Path(self.out_dir)
        self.k_list = tuple(int(k) for k in self.k_list)
        if not self.k_list:
            raise ValueError("k_list must not be empty")
        if any(k < 1 for k in self.k_list):
            raise KTooLarge("every k must be positive")


@dataclass(frozen=True)
class ExperimentRow:
    method: str
    k: int
    silhouette: float
    inertia: float
    iterations: int
    init_indices: tuple
    labels: np.ndarray
    per_series_silhouette: np.ndarray


@dataclass
class ExperimentReport:
    rows: list
    timing: dict
    threads: int
    raw: np.ndarray
    representations: dict
    dataset_labels: np.ndarray

    def row(self, method, k):
        for r in self.rows:
            if r.method == method and r.k == k:
                return r
        raise KeyError((method, k))

    def sorted_rows(self):
        return sorted(self.rows, key=lambda r: (r.method, r.k))


def _timed_convert(item, method, hp, w):
    index, row = item
    start = time.perf_counter()
    if method == "npfree":
        values = convert(row, hp=hp, w=w, source_index=index).values
    elif method == "znorm":
        values = z_normalize(row, source_index=index).values
    else:
        raise ValueError(f"unknown method {method!r}")
    return values, time.perf_counter() - start


def convert_all(X, method, hp=None, w=DEFAULT_W, threads=1):
    """Convert every row of ``X``; returns the stacked output and per-series seconds."""
    work = partial(_timed_convert, method=method, hp=hp or lstm.LstmHyperparams(), w=w)
    results = ordered_map(work, list(enumerate(np.asarray(X, dtype=np.float64))), threads)
    reps = np.vstack([v for v, _ in results])
    seconds = np.array([s for _, s in results])
    return reps, seconds


def time_preprocessing(dataset, method, hp=None, w=DEFAULT_W, threads=1):
    """Mean and population standard deviation of per-series conversion time."""
    X = dataset.to_array() if hasattr(dataset, "to_array") else np.asarray(dataset)
    if len(X) == 0:
        raise ValueError("cannot time an empty dataset")
    _, seconds = convert_all(X, method, hp=hp, w=w, threads=threads)
    return float(seconds.mean()), float(seconds.std())


def run_experiment(cfg):
    ds = load_dataset(cfg.input, cfg.class_filter)
    X = ds.to_array()
    n = X.shape[0]
    too_big = [k for k in cfg.k_list if k > n]
    if too_big:
        raise KTooLarge(f"k values {too_big} exceed the {n} selected series")
    threads = resolve_threads(cfg.threads)

    reps, timing = {}, {}
    for method in METHODS:
        log.info("converting %d series with %s on %d worker(s)", n, method, threads)
        reps[method], seconds = convert_all(X, method, cfg.hyperparams, cfg.w, threads)
        timing[method] = (float(seconds.mean()), float(seconds.std()))

    rows = []
    for k in cfg.k_list:
        init = select_initial_centroids(n, k, cfg.seed)
        for method in METHODS:
            res = kmeans(reps[method], ClusteringConfig(k=k, init_indices=init))
            sil = silhouette_overall(X, res.labels)
            rows.append(ExperimentRow(
                method=method, k=k, silhouette=sil.overall, inertia=res.inertia,
                iterations=res.iterations, init_indices=init, labels=res.labels,
                per_series_silhouette=sil.per_series,
            ))
            log.info("%s k=%d silhouette=%.4f", method, k, sil.overall)
    return ExperimentReport(
        rows=rows, timing=timing, threads=threads, raw=X,
        representations=reps, dataset_labels=ds.labels,
    )


def _fmt(x):
    return f"{x:.6f}"


def _write_report_csv(path, report, timing_in_report):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in report.sorted_rows():
            mean, std = report.timing[r.method]
            timing = [_fmt(mean), _fmt(std)] if timing_in_report else ["", ""]
            writer.writerow([r.method, r.k, _fmt(r.silhouette), _fmt(r.inertia), r.iterations, *timing])


def _write_timing_csv(path, report):
    n = report.raw.shape[0]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "n_series", "threads", "preprocess_mean_s", "preprocess_std_s"])
        for method in sorted(report.timing):
            mean, std = report.timing[method]
            writer.writerow([method, n, report.threads, _fmt(mean), _fmt(std)])


def emit_report(report, out_dir, plot=False, timing_in_report=False):
    """Write ``report.csv`` plus per-run dumps under ``out_dir``.

    ``report.csv`` leaves the two timing columns empty unless
    ``timing_in_report`` is set, which keeps it byte-identical between
    runs. Wall-clock statistics always go to ``timing.csv``.
    """
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / "report.csv"
        _write_report_csv(path, report, timing_in_report)
        written.append(path)
        path = out / "timing.csv"
        _write_timing_csv(path, report)
        written.append(path)

        rmse_dir = out / "rmse"
        rmse_dir.mkdir(exist_ok=True)
        for i, values in enumerate(report.representations["npfree"]):
            path = rmse_dir / f"series_{i + 1:03d}.csv"
            write_rmse_csv(path, RmseSeries(values=values, source_index=i))
            written.append(path)

        clusters_dir = out / "clusters"
        clusters_dir.mkdir(exist_ok=True)
        for r in report.sorted_rows():
            path = clusters_dir / f"labels_{r.method}_k{r.k}.csv"
            write_labels_csv(path, r.labels)
            written.append(path)
            path = clusters_dir / f"silhouette_{r.method}_k{r.k}.csv"
            write_silhouette_csv(
                path, r.labels, SilhouetteReport(r.per_series_silhouette, r.silhouette)
            )
            written.append(path)

        if plot:
            from .plots import plot_clusters, plot_silhouette_vs_k

            written.append(plot_silhouette_vs_k(report, out / "silhouette_vs_k.svg"))
            for r in report.sorted_rows():
                written.append(plot_clusters(
                    report, r.method, r.k, out / f"clusters_{r.method}_k{r.k}.svg"
                ))
    except OSError as exc:
        raise ReportWriteFailure(f"cannot write report to {out}: {exc}") from exc
    return written


def format_summary(report, reference=None):
    """Human-readable table; ``reference`` maps k to published (npfree, znorm) silhouettes."""
    ks = sorted({r.k for r in report.rows})
    lines = [f"{'k':>4}  {'npfree':>8}  {'znorm':>8}  winner"]
    for k in ks:
        a, b = report.row("npfree", k).silhouette, report.row("znorm", k).silhouette
        line = f"{k:>4}  {a:8.4f}  {b:8.4f}  {'npfree' if a > b else 'znorm' if b > a else 'tie'}"
        if reference and k in reference:
            ra, rb = reference[k]
            line += f"   (reference {ra:.4f} vs {rb:.4f})"
        lines.append(line)
    for method in METHODS:
        mean, std = report.timing[method]
        lines.append(f"{method} preprocessing: mean {mean:.6f} s, std {std:.6f} s per series")
    if report.timing["znorm"][0] > 0 and not math.isnan(report.timing["znorm"][0]):
        lines.append(f"time ratio npfree/znorm: {report.timing['npfree'][0] / report.timing['znorm'][0]:.0f}x")
    lines.append(f"worker processes: {report.threads}")
    return "\n".join(lines)


# Silhouette values reported for the two GunPoint subsets, (npfree, znorm) per k.
REFERENCE_POINT_TRAIN = {
    13: (0.4110, 0.3327), 14: (0.4093, 0.3654), 15: (0.5035, 0.3766), 17: (0.4326, 0.3594),
    19: (0.3696, 0.2853), 20: (0.3404, 0.2845), 21: (0.3484, 0.3129), 22: (0.3599, 0.2787),
    26: (0.3388, 0.2345), 28: (0.3257, 0.2004), 29: (0.3077, 0.2332), 33: (0.2935, 0.2294),
}
REFERENCE_MALE_TRAIN = {
    13: (0.2240, 0.1512), 15: (0.2590, 0.1986), 16: (0.3659, 0.2231), 18: (0.3335, 0.2284),
    20: (0.3422, 0.2108), 23: (0.2873, 0.1858), 26: (0.2969, 0.1339), 28: (0.2734, 0.2085),
    29: (0.2423, 0.1991),
}

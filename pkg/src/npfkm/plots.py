"""SVG figures for experiment reports (file output only)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_LABELS = {"npfree": "NPF-kmeans", "znorm": "z-kmeans"}
_REP_TITLES = {"npfree": "RMSE series", "znorm": "z-normalized series"}


def _save(fig, path):
    with matplotlib.rc_context({"svg.hashsalt": "npfkm", "svg.fonttype": "none"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_silhouette_vs_k(report, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for method in sorted({r.method for r in report.rows}):
        rows = sorted((r for r in report.rows if r.method == method), key=lambda r: r.k)
        ax.plot([r.k for r in rows], [r.silhouette for r in rows], marker="o",
                label=_LABELS.get(method, method))
    ax.set_xlabel("k")
    ax.set_ylabel("overall silhouette (raw series)")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_clusters(report, method, k, path):
    """One row per cluster: the clustered representation left, raw series right."""
    row = report.row(method, k)
    rep = report.representations[method]
    raw = report.raw
    fig, axes = plt.subplots(k, 2, figsize=(8, 1.4 * k), squeeze=False, sharex="col")
    for j in range(k):
        members = np.flatnonzero(row.labels == j)
        left, right = axes[j]
        for i in members:
            left.plot(rep[i], lw=0.8)
            right.plot(raw[i], lw=0.8)
        left.set_ylabel(f"{j} (n={members.size})", fontsize=8)
        left.tick_params(labelsize=6)
        right.tick_params(labelsize=6)
    axes[0, 0].set_title(_REP_TITLES.get(method, method), fontsize=9)
    axes[0, 1].set_title("raw series", fontsize=9)
    fig.tight_layout()
    return _save(fig, path)

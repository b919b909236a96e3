"""Command-line entry point: ``npfkm convert`` and ``npfkm bench``."""

import argparse
import logging
import sys
from pathlib import Path

from . import lstm
from ._parallel import resolve_threads
from .bench import (
    DEFAULT_K_LIST,
    METHODS,
    ExperimentConfig,
    convert_all,
    emit_report,
    format_summary,
    run_experiment,
)
from .dataset_io import LabeledRecord, load_dataset, write_dataset
from .exceptions import NpfkmError
from .npfree import RmseSeries, write_rmse_csv


def _k_list(text):
    try:
        ks = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k list {text!r}") from None
    if not ks:
        raise argparse.ArgumentTypeError("k list is empty")
    return ks


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npfkm",
        description="k-means time-series clustering with NP-Free or z-normalization front-ends.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, type=Path, help="UCR-format text file")
        p.add_argument("--class-label", type=int, default=None, help="keep only this class")
        p.add_argument("--w", type=int, default=150, help="NP-Free threshold window")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: $NPFKM_THREADS or 1; -1 = all cores)")
        p.add_argument("--out", required=True, type=Path, help="output directory")

    conv = sub.add_parser("convert", help="convert every series and write the representation")
    common(conv)
    conv.add_argument("--method", required=True, choices=METHODS)

    bench = sub.add_parser("bench", help="run the clustering comparison over a k sweep")
    common(bench)
    bench.add_argument("--k-list", type=_k_list, default=DEFAULT_K_LIST,
                       help="comma-separated cluster counts (default: 13,14,...,33)")
    bench.add_argument("--seed", type=int, default=1, help="seed for initial centroid indices")
    bench.add_argument("--plot", action="store_true", help="also write SVG figures")
    bench.add_argument("--timing-in-report", action="store_true",
                       help="fill the timing columns of report.csv (makes it run-dependent)")
    return parser


def _convert(args):
    ds = load_dataset(args.input, args.class_label)
    reps, seconds = convert_all(ds.to_array(), args.method, lstm.LstmHyperparams(), args.w,
                                resolve_threads(args.threads))
    args.out.mkdir(parents=True, exist_ok=True)
    records = [LabeledRecord(rec.label, tuple(float(v) for v in rep))
               for rec, rep in zip(ds.records, reps)]
    write_dataset(args.out / f"{args.method}.txt", records)
    if args.method == "npfree":
        rmse_dir = args.out / "rmse"
        rmse_dir.mkdir(exist_ok=True)
        for i, values in enumerate(reps):
            write_rmse_csv(rmse_dir / f"series_{i + 1:03d}.csv", RmseSeries(values, i))
    print(f"converted {len(ds)} series with {args.method}: "
          f"mean {seconds.mean():.6f} s, std {seconds.std():.6f} s per series -> {args.out}")


def _bench(args):
    cfg = ExperimentConfig(
        input=args.input, class_filter=args.class_label, k_list=args.k_list,
        seed=args.seed, w=args.w, out_dir=args.out, threads=args.threads,
    )
    report = run_experiment(cfg)
    emit_report(report, cfg.out_dir, plot=args.plot, timing_in_report=args.timing_in_report)
    print(format_summary(report))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "convert":
            _convert(args)
        else:
            _bench(args)
    except (NpfkmError, OSError, ValueError) as exc:
        msg = " ".join(str(exc).split())
        print(f"npfkm: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

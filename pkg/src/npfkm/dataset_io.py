"""Reading and writing UCR-archive style text files.

Each non-blank line holds one univariate series: the class label first,
then the observations. Tokens may be separated by commas, whitespace or
any mix of the two.
"""

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import EmptySelection, MalformedLine, RaggedLengths

__all__ = [
    "LabeledRecord",
    "Dataset",
    "parse_record",
    "render_record",
    "load_dataset",
    "write_dataset",
]

_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class LabeledRecord:
    label: int
    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("a record needs at least one value")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("record values must be finite")


@dataclass(frozen=True)
class Dataset:
    records: tuple
    series_length: int

    def __len__(self):
        return len(self.records)

    @property
    def labels(self):
        return np.array([r.label for r in self.records], dtype=np.int64)

    def to_array(self):
        """Stack the series into an ``(n_series, series_length)`` float array."""
        return np.array([r.values for r in self.records], dtype=np.float64)


def _to_float(token):
    try:
        value = float(token)
    except ValueError:
        raise MalformedLine(f"non-numeric token {token!r}") from None
    if not math.isfinite(value):
        raise MalformedLine(f"non-finite token {token!r}")
    return value


def parse_record(line):
    """Parse one label-first line into a :class:`LabeledRecord`.

    Real-valued labels such as ``2.0000`` are truncated toward zero.
    """
    tokens = [t for t in _SPLIT.split(line.strip()) if t]
    if len(tokens) < 2:
        raise MalformedLine(f"expected a label and at least one value, got {len(tokens)} token(s)")
    label = int(_to_float(tokens[0]))
    return LabeledRecord(label=label, values=tuple(_to_float(t) for t in tokens[1:]))


def render_record(record, delimiter=","):
    # repr() of a float round-trips exactly through float()
    return delimiter.join([str(record.label)] + [repr(float(v)) for v in record.values])


def load_dataset(path, class_filter=None):
    """Load a UCR text file, keeping only records whose label equals ``class_filter``.

    Records keep their file order. Blank lines are skipped.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_record(line)
            except MalformedLine as exc:
                raise MalformedLine(str(exc), line_number=lineno) from None
            if class_filter is None or record.label == class_filter:
                records.append(record)

    if not records:
        which = "any class" if class_filter is None else f"class {class_filter}"
        raise EmptySelection(f"{path}: no records for {which}")

    length = len(records[0].values)
    for i, rec in enumerate(records):
        if len(rec.values) != length:
            raise RaggedLengths(
                f"{path}: record {i + 1} has length {len(rec.values)}, expected {length}"
            )
    return Dataset(records=tuple(records), series_length=length)


def write_dataset(path, records, delimiter=","):
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(render_record(rec, delimiter) + "\n")
    return path

"""Categorical dataset ingestion and frequency statistics.

A dataset is a dense matrix of global value ids: every feature owns a
contiguous, disjoint id range, so a value id identifies both the value
and its feature.  All counts are kept as exact integers; frequencies are
derived as count / N only where a float is actually consumed, which keeps
repeated runs bit-stable.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .kernels import cooccurrence_counts, value_supports

logger = logging.getLogger(__name__)

_TRUE_LABELS = {"1", "yes", "true", "y", "outlier", "anomaly"}
_FALSE_LABELS = {"0", "no", "false", "n", "normal"}


class DataFormatError(ValueError):
    """Malformed input data (ragged rows, empty files, bad labels)."""


@dataclass
class CategoricalDataset:
    """N objects by D categorical features, encoded as global value ids.

    Attributes
    ----------
    cells : (N, D) int32 array
        Global value id of each cell; ``cells[i, j]`` lies in feature j's
        id range ``[feature_offsets[j], feature_offsets[j + 1])``.
    feature_offsets : (D + 1,) int64 array
        Contiguous, pairwise-disjoint id ranges, one per feature.
    feature_names, value_names : display strings.
    labels : optional (N,) uint8 array
        1 marks an outlier.  Evaluation-only; never consulted by detectors.
    """

    cells: np.ndarray
    feature_offsets: np.ndarray
    feature_names: tuple[str, ...]
    value_names: tuple[str, ...]
    labels: np.ndarray | None = None

    @property
    def n_objects(self) -> int:
        return self.cells.shape[0]

    @property
    def n_features(self) -> int:
        return self.cells.shape[1]

    @property
    def n_values(self) -> int:
        return int(self.feature_offsets[-1])

    def feature_of_values(self) -> np.ndarray:
        """(|V|,) array mapping each value id to its owning feature."""
        out = np.zeros(self.n_values, dtype=np.int64)
        for j in range(self.n_features):
            out[self.feature_offsets[j] : self.feature_offsets[j + 1]] = j
        return out

    def domain(self, j: int) -> range:
        return range(int(self.feature_offsets[j]), int(self.feature_offsets[j + 1]))

    def value_id(self, name: str) -> int:
        return self.value_names.index(name)

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        off = self.feature_offsets
        if len(off) != self.n_features + 1 or off[0] != 0:
            raise ValueError("feature_offsets must have D+1 entries starting at 0")
        if np.any(np.diff(off) <= 0):
            raise ValueError("every feature needs a non-empty value domain")
        lo = off[:-1][None, :]
        hi = off[1:][None, :]
        if np.any(self.cells < lo) or np.any(self.cells >= hi):
            raise ValueError("cell value id outside its feature domain")
        if len(self.value_names) != self.n_values:
            raise ValueError("value_names length mismatch")
        if self.labels is not None and len(self.labels) != self.n_objects:
            raise ValueError("labels length mismatch")


@dataclass
class FrequencyStats:
    """Value supports, per-feature modes and sparse co-occurrence counts.

    ``pair_u``/``pair_v``/``pair_count`` hold one entry per observed
    cross-feature value pair with u from the lower-indexed feature (hence
    u < v, domains being contiguous by feature).  Absent pairs count 0.
    """

    n_objects: int
    supp: np.ndarray
    mode: np.ndarray
    pair_u: np.ndarray
    pair_v: np.ndarray
    pair_count: np.ndarray
    feature_offsets: np.ndarray
    _pair_lookup: dict | None = field(default=None, repr=False)

    @property
    def n_values(self) -> int:
        return len(self.supp)

    @property
    def n_features(self) -> int:
        return len(self.feature_offsets) - 1

    @property
    def freq(self) -> np.ndarray:
        return self.supp / self.n_objects

    def mode_freq(self, j: int) -> float:
        return self.supp[self.mode[j]] / self.n_objects

    def feature_of_values(self) -> np.ndarray:
        out = np.zeros(self.n_values, dtype=np.int64)
        for j in range(self.n_features):
            out[self.feature_offsets[j] : self.feature_offsets[j + 1]] = j
        return out

    def joint_supp(self, u: int, v: int) -> int:
        """Co-occurrence count of values u and v (0 if never observed)."""
        if self._pair_lookup is None:
            self._pair_lookup = {
                (int(a), int(b)): int(c)
                for a, b, c in zip(self.pair_u, self.pair_v, self.pair_count)
            }
        key = (u, v) if u < v else (v, u)
        return self._pair_lookup.get(key, 0)


def load_csv(
    path,
    has_header: bool = True,
    label_column: str | int | None = None,
    delimiter: str = ",",
) -> CategoricalDataset:
    """Load a categorical table from a CSV file (RFC-4180 quoting, UTF-8).

    Every non-label column is treated as a categorical string and interned
    to a value id in first-appearance order; row order is preserved.
    ``label_column`` selects a binary outlier tag by header name or by
    0-based index.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        rows = list(reader)
    if not rows:
        raise DataFormatError(f"{path}: empty file")

    header = rows[0] if has_header else None
    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise DataFormatError(f"{path}: no data rows")

    width = len(data_rows[0])
    for i, row in enumerate(data_rows):
        if len(row) != width:
            row_no = i + (2 if has_header else 1)
            raise DataFormatError(f"{path}: row {row_no} has {len(row)} columns, expected {width}")

    label_idx = None
    if label_column is not None:
        if isinstance(label_column, int) or str(label_column).lstrip("-").isdigit():
            label_idx = int(label_column)
            if not 0 <= label_idx < width:
                raise DataFormatError(f"label column index {label_idx} out of range")
        else:
            if header is None:
                raise DataFormatError("label column by name requires a header")
            try:
                label_idx = header.index(str(label_column))
            except ValueError:
                raise DataFormatError(f"label column {label_column!r} not in header") from None

    feature_cols = [j for j in range(width) if j != label_idx]
    if not feature_cols:
        raise DataFormatError("no feature columns left after removing the label column")
    if header is not None:
        feature_names = tuple(header[j] for j in feature_cols)
    else:
        feature_names = tuple(f"f{j}" for j in feature_cols)

    labels = None
    if label_idx is not None:
        labels = np.zeros(len(data_rows), dtype=np.uint8)
        for i, row in enumerate(data_rows):
            tag = row[label_idx].strip().lower()
            if tag in _TRUE_LABELS:
                labels[i] = 1
            elif tag in _FALSE_LABELS:
                labels[i] = 0
            else:
                raise DataFormatError(
                    f"{path}: unknown label value {row[label_idx]!r} in row {i + (2 if has_header else 1)}"
                )

    n, d = len(data_rows), len(feature_cols)
    cells = np.zeros((n, d), dtype=np.int32)
    offsets = np.zeros(d + 1, dtype=np.int64)
    value_names: list[str] = []
    for out_j, j in enumerate(feature_cols):
        interned: dict[str, int] = {}
        base = len(value_names)
        col = cells[:, out_j]
        for i, row in enumerate(data_rows):
            vid = interned.setdefault(row[j], base + len(interned))
            col[i] = vid
        value_names.extend(f"{feature_names[out_j]}={v}" for v in interned)
        offsets[out_j + 1] = len(value_names)

    ds = CategoricalDataset(cells, offsets, feature_names, tuple(value_names), labels)
    ds.validate()
    return ds


def write_csv(dataset: CategoricalDataset, fh, label_name: str = "label") -> None:
    """Write a dataset back to CSV, appending a label column when present.

    Display names of the form "<feature>=<value>" are unwrapped back to
    the raw value strings.
    """
    writer = csv.writer(fh)
    header = list(dataset.feature_names)
    if dataset.labels is not None:
        header.append(label_name)
    writer.writerow(header)
    raw = [name.split("=", 1)[-1] for name in dataset.value_names]
    for i in range(dataset.n_objects):
        row = [raw[v] for v in dataset.cells[i]]
        if dataset.labels is not None:
            row.append(str(int(dataset.labels[i])))
        writer.writerow(row)


def from_columns(
    feature_names,
    columns,
    labels=None,
) -> CategoricalDataset:
    """Build a dataset from per-feature string columns.

    Values are interned per column in first-appearance order, exactly as
    ``load_csv`` does; value display names are "<feature>=<value>".
    """
    feature_names = tuple(feature_names)
    if len(columns) != len(feature_names):
        raise ValueError("one column per feature name required")
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise ValueError("all columns must have the same length")
    d = len(columns)
    cells = np.zeros((n, d), dtype=np.int32)
    offsets = np.zeros(d + 1, dtype=np.int64)
    value_names: list[str] = []
    for j, col in enumerate(columns):
        interned: dict[str, int] = {}
        base = len(value_names)
        for i, raw in enumerate(col):
            cells[i, j] = interned.setdefault(str(raw), base + len(interned))
        value_names.extend(f"{feature_names[j]}={v}" for v in interned)
        offsets[j + 1] = len(value_names)
    lab = None
    if labels is not None:
        lab = np.asarray(labels, dtype=np.uint8)
    ds = CategoricalDataset(cells, offsets, feature_names, tuple(value_names), lab)
    ds.validate()
    return ds


def take_features(dataset: CategoricalDataset, keep) -> CategoricalDataset:
    """Project onto the given feature ids, re-indexing value ids contiguously."""
    keep = [int(j) for j in keep]
    if not keep:
        raise ValueError("cannot keep zero features")
    offsets = np.zeros(len(keep) + 1, dtype=np.int64)
    value_names: list[str] = []
    cells = np.zeros((dataset.n_objects, len(keep)), dtype=np.int32)
    for out_j, j in enumerate(keep):
        lo, hi = int(dataset.feature_offsets[j]), int(dataset.feature_offsets[j + 1])
        cells[:, out_j] = dataset.cells[:, j] + (len(value_names) - lo)
        value_names.extend(dataset.value_names[lo:hi])
        offsets[out_j + 1] = len(value_names)
    return CategoricalDataset(
        cells,
        offsets,
        tuple(dataset.feature_names[j] for j in keep),
        tuple(value_names),
        dataset.labels,
    )


def preprocess(dataset: CategoricalDataset) -> CategoricalDataset:
    """Drop single-valued features and re-index value ids contiguously.

    A feature whose mode frequency equals 1 carries no information for
    outlier scoring and would put the intra-feature factor at its
    degenerate boundary, so such features are removed up front.  Removed
    feature names are logged.
    """
    supp = value_supports(dataset.cells, dataset.n_values)
    keep = []
    removed = []
    for j in range(dataset.n_features):
        dom = dataset.domain(j)
        if max(int(supp[v]) for v in dom) == dataset.n_objects:
            removed.append(dataset.feature_names[j])
        else:
            keep.append(j)
    if not keep:
        raise DataFormatError("no informative features (all features are single-valued)")
    if not removed:
        return dataset
    logger.info("preprocess removed %d constant feature(s): %s", len(removed), removed)
    return take_features(dataset, keep)


def compute_stats(dataset: CategoricalDataset, threads: int = 1) -> FrequencyStats:
    """Single pass over the data: supports, modes, pairwise co-occurrences.

    Pair counting is O(N * D^2) and may be partitioned over ``threads``;
    the result is identical for any thread count.  Mode ties break toward
    the lowest value id (tied modes share a frequency, so downstream
    factors are unaffected by the choice).
    """
    supp = value_supports(dataset.cells, dataset.n_values)
    mode = np.zeros(dataset.n_features, dtype=np.int64)
    off = dataset.feature_offsets
    for j in range(dataset.n_features):
        seg = supp[off[j] : off[j + 1]]
        mode[j] = off[j] + int(np.argmax(seg))
    pu, pv, pc = cooccurrence_counts(dataset.cells, off, threads=threads)
    return FrequencyStats(
        n_objects=dataset.n_objects,
        supp=supp,
        mode=mode,
        pair_u=pu,
        pair_v=pv,
        pair_count=pc,
        feature_offsets=off.copy(),
    )

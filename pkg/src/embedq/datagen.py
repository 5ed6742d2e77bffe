"""Synthetic datasets, the 2 -> 9 polynomial lift and point-cloud CSV I/O.

Every generator draws from ``numpy.random.PCG64`` seeded explicitly, so
output depends only on the arguments.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import ClusterAssignment, validate_matrix
from .exceptions import InvalidCountError, MissingLabelColumnError, ParseError, WrongInputDimensionError

RING_RADIUS = 1.0
RING_CENTERS = np.array([(-2.2, 0.0), (0.0, 0.0), (2.2, 0.0), (-1.1, -0.9), (1.1, -0.9)])
RING_JITTER = 0.02
SWISS_T_RANGE = (1.5 * np.pi, 4.5 * np.pi)
SWISS_HEIGHT = 21.0
SWISS_BANDS = 4


@dataclass(frozen=True)
class LabeledDataset:
    X: np.ndarray
    labels: ClusterAssignment
    name: str
    columns: tuple = ()

    @property
    def y(self):
        return np.asarray(self.labels.labels)

    def to_csv(self, path, label_column="label"):
        columns = self.columns or default_columns(self.X.shape[1])
        write_point_cloud(path, self.X, columns, self.y, label_column)


def default_columns(p):
    if p <= 3:
        return ("x", "y", "z")[:p]
    return tuple(f"x{j}" for j in range(p))


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def gen_rings(n_per_ring=500, seed=42) -> LabeledDataset:
    """Five interlaced unit circles in the Olympic layout, labelled by ring.

    Angles are uniform; the radius carries Gaussian jitter clipped to three
    standard deviations.
    """
    if n_per_ring < 3:
        raise InvalidCountError(f"n_per_ring must be >= 3, got {n_per_ring}")
    rng = _rng(seed)
    n_rings = len(RING_CENTERS)
    theta = rng.uniform(0.0, 2 * np.pi, size=(n_rings, n_per_ring))
    jitter = np.clip(rng.normal(0.0, RING_JITTER, size=(n_rings, n_per_ring)),
                     -3 * RING_JITTER, 3 * RING_JITTER)
    radius = RING_RADIUS + jitter
    pts = RING_CENTERS[:, None, :] + radius[..., None] * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    X = validate_matrix(pts.reshape(-1, 2))
    labels = np.repeat(np.arange(n_rings), n_per_ring)
    return LabeledDataset(X, ClusterAssignment(labels, n_rings), "rings", ("x", "y"))


def gen_swiss_roll(n=1500, seed=42) -> LabeledDataset:
    """Swiss roll ``(t cos t, h, t sin t)`` with ``t`` in [1.5 pi, 4.5 pi].

    Labels are four equal-width bands of ``t``. Band membership is balanced
    (sizes differ by at most one) and ``t`` is uniform within each band, so
    every label is present for any ``n >= 4``.
    """
    if n < SWISS_BANDS:
        raise InvalidCountError(f"n must be >= {SWISS_BANDS}, got {n}")
    rng = _rng(seed)
    lo, hi = SWISS_T_RANGE
    width = (hi - lo) / SWISS_BANDS
    band = rng.permutation(np.arange(n) % SWISS_BANDS)
    t = lo + width * (band + rng.uniform(0.0, 1.0, size=n))
    h = rng.uniform(0.0, SWISS_HEIGHT, size=n)
    X = validate_matrix(np.column_stack([t * np.cos(t), h, t * np.sin(t)]))
    return LabeledDataset(X, ClusterAssignment(band, SWISS_BANDS), "swissroll", ("x", "y", "z"))


def swiss_band(t):
    """Band label of roll parameter ``t`` (used to check generated labels)."""
    lo, hi = SWISS_T_RANGE
    return np.minimum(((np.asarray(t) - lo) // ((hi - lo) / SWISS_BANDS)).astype(int), SWISS_BANDS - 1)


def lift_2_9(X) -> np.ndarray:
    """Map ``(x, y)`` to ``(x+y, x-y, xy, x^2, y^2, x^2 y, x y^2, x^3, y^3)``."""
    X = validate_matrix(X)
    if X.shape[1] != 2:
        raise WrongInputDimensionError(f"lift_2_9 expects 2 columns, got {X.shape[1]}")
    x, y = X[:, 0], X[:, 1]
    return validate_matrix(np.column_stack(
        [x + y, x - y, x * y, x ** 2, y ** 2, x ** 2 * y, x * y ** 2, x ** 3, y ** 3]))


def _parse_float(cell, line):
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"non-numeric value {cell!r}", line) from None


def _parse_label(cell, line):
    try:
        return int(cell)
    except ValueError:
        value = _parse_float(cell, line)
        if not value.is_integer():
            raise ParseError(f"label {cell!r} is not an integer", line) from None
        return int(value)


def load_point_cloud(path, label_column=None) -> LabeledDataset:
    """Read a headered, comma-separated numeric point cloud.

    With ``label_column`` the named column becomes the class labels (relabelled
    to ``0..c-1``); otherwise every sample gets label 0.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ParseError("missing header", 1)
        header = [h.strip() for h in header]
        label_idx = None
        if label_column is not None:
            if label_column not in header:
                raise MissingLabelColumnError(f"no column named {label_column!r} in {path}")
            label_idx = header.index(label_column)
        rows, labels = [], []
        for line, record in enumerate(reader, start=2):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(record)}", line)
            values = []
            for j, cell in enumerate(record):
                if j == label_idx:
                    labels.append(_parse_label(cell.strip(), line))
                else:
                    values.append(_parse_float(cell.strip(), line))
            rows.append(values)
    columns = tuple(h for j, h in enumerate(header) if j != label_idx)
    if not columns:
        raise ParseError("no feature columns", 1)
    X = validate_matrix(np.array(rows, dtype=np.float64).reshape(len(rows), len(columns)))
    if label_idx is None:
        a = ClusterAssignment(np.zeros(X.shape[0], dtype=np.int64), 1)
    else:
        a = ClusterAssignment.from_labels(labels)
    return LabeledDataset(X, a, str(path), columns)


def read_header(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [h.strip() for h in next(csv.reader(fh), [])]


def write_point_cloud(path_or_file, X, columns=None, labels=None, label_column="label"):
    X = np.asarray(X)
    columns = list(columns or default_columns(X.shape[1]))
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns + ([label_column] if labels is not None else []))
        for i, row in enumerate(X):
            cells = [format(v, ".17g") for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            writer.writerow(cells)
    finally:
        if own:
            fh.close()

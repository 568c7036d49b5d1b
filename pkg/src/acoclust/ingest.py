"""Text-file dataset loading with per-dataset column rules, plus exporters.

Loaders preserve row order (file row i becomes object i), report parse
failures with 1-based file positions, and remap label values to 1..K by
sorted order (numeric when every label parses as a number).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .model import Dataset


class IngestError(ValueError):
    pass


_DELIMITERS = {"comma": ",", "tab": "\t", "semicolon": ";", "whitespace": None}


@dataclass(frozen=True)
class IngestConfig:
    delimiter: str = "comma"
    drop_columns: tuple = ()
    label_column: int | None = None
    standardize: bool = False
    has_header: bool = False

    def __post_init__(self):
        if self.delimiter not in _DELIMITERS:
            raise IngestError(f"unknown delimiter {self.delimiter!r}; expected "
                              f"one of {', '.join(sorted(_DELIMITERS))}")
        drops = tuple(int(c) for c in self.drop_columns)
        object.__setattr__(self, "drop_columns", drops)
        if any(c < 0 for c in drops):
            raise IngestError("drop_columns must be nonnegative")
        if self.label_column is not None:
            if self.label_column < 0:
                raise IngestError("label_column must be nonnegative")
            if self.label_column in drops:
                raise IngestError("label_column cannot also be dropped")


def _split(line: str, delim: str | None) -> list:
    if delim is None:
        return line.split()
    return [c.strip() for c in line.split(delim)]


def _remap_labels(raw: list) -> np.ndarray:
    """Map raw label values onto 1..K by sorted order; numeric sort when
    every value parses as a number (handles gaps in integer label sets)."""
    try:
        keyed = sorted(set(raw), key=float)
    except ValueError:
        keyed = sorted(set(raw))
    lookup = {v: i + 1 for i, v in enumerate(keyed)}
    return np.array([lookup[v] for v in raw], dtype=np.int64)


def load_points(path, config: IngestConfig, name: str | None = None) -> Dataset:
    """Parse a delimited text file into a Dataset under the given column
    rules.  Standardization is a per-column population z-score and rejects
    constant columns."""
    path = Path(path)
    delim = _DELIMITERS[config.delimiter]
    rows = []            # (file_lineno, cells)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rows.append((lineno, _split(line, delim)))
    if config.has_header and rows:
        rows = rows[1:]
    if not rows:
        raise IngestError(f"{path}: no data rows")

    width = len(rows[0][1])
    for lineno, cells in rows:
        if len(cells) != width:
            raise IngestError(f"{path}: row at line {lineno} has "
                              f"{len(cells)} columns, expected {width}")
    for col in (*config.drop_columns,
                *([config.label_column] if config.label_column is not None else [])):
        if col >= width:
            raise IngestError(f"{path}: column index {col} out of range "
                              f"for {width}-column file")

    feature_cols = [c for c in range(width)
                    if c not in config.drop_columns and c != config.label_column]
    if not feature_cols:
        raise IngestError(f"{path}: no feature columns remain")

    points = np.empty((len(rows), len(feature_cols)), dtype=np.float64)
    for r, (lineno, cells) in enumerate(rows):
        for j, col in enumerate(feature_cols):
            try:
                points[r, j] = float(cells[col])
            except ValueError:
                raise IngestError(
                    f"{path}: row at line {lineno}, column {col + 1}: "
                    f"cannot parse {cells[col]!r} as a number") from None

    labels = None
    if config.label_column is not None:
        labels = _remap_labels([cells[config.label_column] for _, cells in rows])

    if config.standardize:
        mean = points.mean(axis=0)
        std = points.std(axis=0, ddof=0)
        for j, col in enumerate(feature_cols):
            if std[j] == 0.0:
                raise IngestError(f"{path}: column {col + 1} is constant; "
                                  "cannot standardize")
        points = (points - mean) / std

    return Dataset(points, name=name or path.stem, truth_labels=labels)


def load_centroids(path, p: int) -> np.ndarray:
    """Read one centroid per row (comma or whitespace separated)."""
    path = Path(path)
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = _split(line, "," if "," in line else None)
            if len(cells) != p:
                raise IngestError(f"{path}: row at line {lineno} has "
                                  f"{len(cells)} columns, expected {p}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                raise IngestError(f"{path}: row at line {lineno}: "
                                  "non-numeric centroid entry") from None
    if not rows:
        raise IngestError(f"{path}: no centroid rows")
    return np.array(rows, dtype=np.float64)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def save_points(path, data: Dataset, include_labels: bool = True) -> None:
    """Comma-delimited export at round-trip precision; truth labels, when
    present and requested, are appended as a final integer column."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(data.n):
            cells = [_fmt(v) for v in data.points[i]]
            if include_labels and data.truth_labels is not None:
                cells.append(str(int(data.truth_labels[i])))
            fh.write(",".join(cells) + "\n")


def save_centroids(path, centroids) -> None:
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    with open(path, "w", encoding="utf-8") as fh:
        for row in centroids:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


@dataclass(frozen=True)
class RegistryEntry:
    """Expected shape and column rules for a known benchmark file."""

    config: IngestConfig
    n: int
    k: int
    p: int
    notes: str = ""


REGISTRY = {
    "iris": RegistryEntry(IngestConfig("comma", (), 4), 150, 3, 4),
    "wine": RegistryEntry(IngestConfig("comma", (), 0), 178, 3, 13),
    "glass": RegistryEntry(IngestConfig("comma", (0,), 10), 214, 6, 9,
                           "column 0 is an id; glass type 4 is absent"),
    "winequality-red": RegistryEntry(
        IngestConfig("semicolon", (11,), None, has_header=True), 1599, 3, 11,
        "quality column dropped (output variable)"),
    "winequality-white": RegistryEntry(
        IngestConfig("semicolon", (11,), None, has_header=True), 4898, 3, 11,
        "quality column dropped (output variable)"),
    "a1": RegistryEntry(IngestConfig("whitespace"), 3000, 20, 2),
    "a2": RegistryEntry(IngestConfig("whitespace"), 5250, 35, 2),
    "a3": RegistryEntry(IngestConfig("whitespace"), 7500, 50, 2),
    "s1": RegistryEntry(IngestConfig("whitespace"), 5000, 15, 2),
    "s2": RegistryEntry(IngestConfig("whitespace"), 5000, 15, 2),
    "s3": RegistryEntry(IngestConfig("whitespace"), 5000, 15, 2),
    "s4": RegistryEntry(IngestConfig("whitespace"), 5000, 15, 2),
}


def load_registry(name: str, path, standardize: bool = False) -> Dataset:
    """Load a known benchmark file and verify its shape matches the
    registry; mismatches fail loudly rather than proceeding."""
    key = name.strip().lower()
    if key not in REGISTRY:
        raise IngestError(f"unknown dataset {name!r}; known: "
                          f"{', '.join(sorted(REGISTRY))}")
    entry = REGISTRY[key]
    config = replace(entry.config, standardize=standardize)
    data = load_points(path, config, name=key)
    if data.n != entry.n or data.p != entry.p:
        raise IngestError(
            f"{path}: loaded n={data.n}, p={data.p} but {key} should have "
            f"n={entry.n}, p={entry.p}; wrong file or layout")
    if data.truth_labels is not None:
        k_seen = int(data.truth_labels.max())
        if k_seen != entry.k:
            raise IngestError(f"{path}: found {k_seen} label classes, "
                              f"expected {entry.k}")
    return data

"""Seeded Gaussian-mixture benchmark datasets and point-file IO.

Data generation is deterministic: all randomness comes from NumPy's PCG64
generator seeded with the 64-bit value in :class:`GeneratorSpec`, and
normal deviates use NumPy's ziggurat sampler.  The same spec therefore
always produces the same matrix on one installation.  Points are emitted
component by component in spec order, so the truth labels are sorted.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataFormatError

__all__ = [
    "Component",
    "DataMatrix",
    "GeneratorSpec",
    "Truth",
    "dataset1_spec",
    "dataset2_spec",
    "generate_gaussian_mixture",
    "load_points",
    "save_points",
    "PRESETS",
]


@dataclass(frozen=True)
class Component:
    """One isotropic Gaussian component: N(mean, stddev^2 * I) with `count` draws."""

    mean: tuple
    stddev: float
    count: int


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a Gaussian-mixture benchmark dataset.

    All component means must share one dimension, every count must be a
    positive integer and every stddev non-negative.  Only isotropic
    covariance is supported.
    """

    components: tuple
    seed: int

    def __post_init__(self):
        if len(self.components) == 0:
            raise ValueError("spec needs at least one component")
        comps = tuple(
            c if isinstance(c, Component) else Component(tuple(float(v) for v in c[0]), float(c[1]), int(c[2]))
            for c in self.components
        )
        object.__setattr__(self, "components", comps)
        dim = len(comps[0].mean)
        for k, c in enumerate(comps):
            if len(c.mean) != dim:
                raise ValueError(
                    f"component {k} mean has dimension {len(c.mean)}, expected {dim}"
                )
            if c.count < 1:
                raise ValueError(f"component {k} count must be >= 1")
            if c.stddev < 0:
                raise ValueError(f"component {k} stddev must be >= 0")
        if int(self.seed) < 0:
            raise ValueError("seed must be a non-negative integer")
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def dim(self):
        return len(self.components[0].mean)

    @property
    def total_count(self):
        return sum(c.count for c in self.components)


@dataclass(frozen=True)
class Truth:
    """Ground truth attached to a generated dataset."""

    centers: np.ndarray          # (c, D)
    labels: np.ndarray           # (N,) component index per point
    stddevs: tuple = None
    counts: tuple = None
    seed: int = None


@dataclass
class DataMatrix:
    """N points in D dimensions plus optional ground truth."""

    points: np.ndarray
    truth: Truth = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("points must be a non-empty N x D matrix")
        self.points = pts
        if self.truth is not None:
            centers = np.asarray(self.truth.centers, dtype=np.float64)
            labels = np.asarray(self.truth.labels, dtype=np.int64)
            if centers.ndim != 2 or centers.shape[1] != pts.shape[1]:
                raise ValueError("truth centers must be c x D")
            if labels.shape != (pts.shape[0],):
                raise ValueError("truth labels must have one entry per point")
            if labels.min() < 0 or labels.max() >= centers.shape[0]:
                raise ValueError("truth labels index nonexistent components")
            object.__setattr__(self.truth, "centers", centers)
            object.__setattr__(self.truth, "labels", labels)

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def generate_gaussian_mixture(spec: GeneratorSpec) -> DataMatrix:
    """Draw the mixture described by `spec`.

    Component k contributes `count_k` points from an isotropic normal at
    its mean; identical spec and seed give bit-identical output.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    blocks = []
    labels = []
    for k, comp in enumerate(spec.components):
        noise = rng.standard_normal((comp.count, spec.dim))
        blocks.append(np.asarray(comp.mean) + comp.stddev * noise)
        labels.append(np.full(comp.count, k, dtype=np.int64))
    truth = Truth(
        centers=np.array([c.mean for c in spec.components], dtype=np.float64),
        labels=np.concatenate(labels),
        stddevs=tuple(c.stddev for c in spec.components),
        counts=tuple(c.count for c in spec.components),
        seed=spec.seed,
    )
    return DataMatrix(points=np.vstack(blocks), truth=truth)


def dataset1_spec(seed: int = 0) -> GeneratorSpec:
    """Two well-separated clusters of very different spread and size:
    a tight 200-point cluster at (13, 13) next to a broad 1000-point
    cluster at (5, 0)."""
    return GeneratorSpec(
        components=(
            Component((13.0, 13.0), 1.0, 200),
            Component((5.0, 0.0), 3.7, 1000),
        ),
        seed=seed,
    )


def dataset2_spec(seed: int = 0) -> GeneratorSpec:
    """Three equally sized tight clusters, two of them close together:
    400 points each at (1, 0), (2.25, 1.5) and (1.75, 2), stddev 0.2."""
    return GeneratorSpec(
        components=(
            Component((1.0, 0.0), 0.2, 400),
            Component((2.25, 1.5), 0.2, 400),
            Component((1.75, 2.0), 0.2, 400),
        ),
        seed=seed,
    )


PRESETS = {"dataset1": dataset1_spec, "dataset2": dataset2_spec}


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest string that round-trips.
    return repr(float(x))


def sidecar_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_suffix(".truth.json") if p.suffix == ".csv" else Path(str(p) + ".truth.json")


def save_points(data: DataMatrix, destination) -> None:
    """Write points as CSV (header ``x1,...,xD[,label]``) at full precision.

    When ground truth is present, labels go into the CSV and the centers
    (plus generator metadata, when known) into a ``.truth.json`` sidecar.
    """
    dest = Path(destination)
    with_labels = data.truth is not None
    with dest.open("w", newline="") as fh:
        writer = csv.writer(fh)
        header = [f"x{i + 1}" for i in range(data.dim)]
        if with_labels:
            header.append("label")
        writer.writerow(header)
        for i in range(data.n_points):
            row = [_fmt(v) for v in data.points[i]]
            if with_labels:
                row.append(str(int(data.truth.labels[i])))
            writer.writerow(row)
    if with_labels:
        payload = {"centers": [[float(v) for v in row] for row in data.truth.centers]}
        if data.truth.stddevs is not None:
            payload["stddevs"] = list(data.truth.stddevs)
        if data.truth.counts is not None:
            payload["counts"] = list(data.truth.counts)
        if data.truth.seed is not None:
            payload["seed"] = int(data.truth.seed)
        sidecar_path(dest).write_text(json.dumps(payload, indent=2) + "\n")


def load_points(source) -> DataMatrix:
    """Read a CSV written by :func:`save_points` (sidecar picked up if present)."""
    src = Path(source)
    try:
        text = src.read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {src}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataFormatError(f"{src}: empty file")
    reader = csv.reader(lines)
    header = next(reader)
    has_label = header and header[-1] == "label"
    dim = len(header) - (1 if has_label else 0)
    if dim < 1:
        raise DataFormatError(f"{src}: header defines no coordinate columns")
    rows, labels = [], []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise DataFormatError(
                f"{src}:{lineno}: expected {len(header)} columns, got {len(row)}"
            )
        try:
            rows.append([float(v) for v in row[:dim]])
            if has_label:
                labels.append(int(row[dim]))
        except ValueError as exc:
            raise DataFormatError(f"{src}:{lineno}: {exc}") from exc
    if not rows:
        raise DataFormatError(f"{src}: no data rows")
    points = np.asarray(rows, dtype=np.float64)

    truth = None
    side = sidecar_path(src)
    if has_label and side.exists():
        meta = json.loads(side.read_text())
        truth = Truth(
            centers=np.asarray(meta["centers"], dtype=np.float64),
            labels=np.asarray(labels, dtype=np.int64),
            stddevs=tuple(meta["stddevs"]) if "stddevs" in meta else None,
            counts=tuple(meta["counts"]) if "counts" in meta else None,
            seed=meta.get("seed"),
        )
    return DataMatrix(points=points, truth=truth)


def as_points(data) -> np.ndarray:
    """Accept a DataMatrix or a plain array and return the N x D float matrix."""
    if isinstance(data, DataMatrix):
        return data.points
    pts = np.asarray(data, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("expected an N x D point matrix")
    return pts

"""Dataset container, CSV round-trip, normalization, synthetic generators.

The three generators emit 22-column datasets in which only the first two
columns carry information about the label; the remaining 20 are standard
normal noise. They are the workloads the benchmark harness ranks
features on. All randomness comes from NumPy's PCG64 via
``np.random.default_rng(seed)`` with a fixed draw order (documented per
generator), so outputs are bit-reproducible for a given seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ParameterError

N_NOISE = 20
MULTICLASS_MAX_CLASSES = 20


class LabelType(Enum):
    BINARY = "binary"  # values +1 / -1
    MULTICLASS = "multiclass"  # class ids 0..c-1
    REAL = "real"


@dataclass
class Dataset:
    """An m-by-d feature matrix with a typed label vector."""

    features: np.ndarray
    labels: np.ndarray
    label_type: LabelType
    feature_names: list[str]
    provenance: str = ""

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2 or self.features.shape[0] < 1:
            raise ParameterError(f"features must be a nonempty 2-D matrix, got {self.features.shape}")
        if not np.all(np.isfinite(self.features)):
            raise ParameterError("features contain non-finite values")
        if len(self.feature_names) != self.features.shape[1]:
            raise ParameterError(
                f"{len(self.feature_names)} names for {self.features.shape[1]} features"
            )
        self.labels = np.asarray(self.labels)
        if self.labels.shape != (self.features.shape[0],):
            raise ParameterError("labels must be a vector with one entry per row")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]


def _infer_label_type(raw: np.ndarray) -> LabelType:
    distinct = np.unique(raw)
    if distinct.size == 2:
        return LabelType.BINARY
    # A single repeated value cannot be a two-class problem and a
    # one-class "multiclass" is degenerate; treating it as real yields a
    # constant label kernel downstream, which scores zero dependence.
    if distinct.size == 1:
        return LabelType.REAL
    if distinct.size <= MULTICLASS_MAX_CLASSES and np.all(distinct == np.floor(distinct)):
        return LabelType.MULTICLASS
    return LabelType.REAL


def _coerce_labels(raw: np.ndarray, label_type: LabelType) -> np.ndarray:
    distinct = np.unique(raw)
    if label_type is LabelType.BINARY:
        if distinct.size != 2:
            raise ParameterError(
                f"binary labels need exactly 2 distinct values, found {distinct.size}"
            )
        return np.where(raw == distinct[1], 1, -1).astype(np.int64)
    if label_type is LabelType.MULTICLASS:
        return np.searchsorted(distinct, raw).astype(np.int64)
    return raw.astype(np.float64)


def load_csv(
    path: str | Path, label_column: str, label_type: LabelType | None = None
) -> Dataset:
    """Load a dataset from a headered, comma-separated UTF-8 file.

    The label type is inferred unless ``label_type`` is given: exactly
    two distinct values map to +/-1 (ascending value order), up to 20
    distinct integral values become class ids 0..c-1, anything else is
    real-valued.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParameterError(f"{path}: file is empty") from None
        rows = list(reader)
    if label_column not in header:
        raise ParameterError(f"{path}: no column named {label_column!r} in header")
    if not rows:
        raise ParameterError(f"{path}: no data rows")
    values = np.empty((len(rows), len(header)))
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise ParameterError(
                f"{path}: row {r + 2} has {len(row)} cells, header has {len(header)}"
            )
        for c, cell in enumerate(row):
            try:
                values[r, c] = float(cell)
            except ValueError:
                raise ParameterError(
                    f"{path}: non-numeric value {cell!r} at row {r + 2}, "
                    f"column {header[c]!r}"
                ) from None
    label_idx = header.index(label_column)
    raw_labels = values[:, label_idx]
    feature_cols = [c for c in range(len(header)) if c != label_idx]
    kind = label_type or _infer_label_type(raw_labels)
    return Dataset(
        features=values[:, feature_cols],
        labels=_coerce_labels(raw_labels, kind),
        label_type=kind,
        feature_names=[header[c] for c in feature_cols],
        provenance=str(path),
    )


def save_csv(dataset: Dataset, path: str | Path, label_column: str = "y") -> None:
    """Write ``dataset`` as CSV; exact float round-trip via 17 significant digits."""
    path = Path(path)
    integral = dataset.label_type in (LabelType.BINARY, LabelType.MULTICLASS)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(dataset.feature_names) + [label_column])
        for row, label in zip(dataset.features, dataset.labels):
            cells = [f"{v:.17g}" for v in row]
            cells.append(str(int(label)) if integral else f"{float(label):.17g}")
            writer.writerow(cells)


def zscore_normalize(dataset: Dataset) -> Dataset:
    """Scale each feature to zero mean and unit (population) variance.

    Constant columns map to all-zeros instead of dividing by zero.
    """
    if dataset.n_samples < 2:
        raise ParameterError("normalization needs at least 2 samples")
    x = dataset.features
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    constant = std == 0.0
    out = (x - mean) / np.where(constant, 1.0, std)
    out[:, constant] = 0.0
    return replace(dataset, features=out)


def _feature_names() -> list[str]:
    return [f"f{i}" for i in range(2 + N_NOISE)]


def _split_counts(n: int) -> tuple[int, int]:
    return (n + 1) // 2, n // 2


def synth_xor(m: int, seed: int = 0) -> Dataset:
    """Two-class data with an exclusive-or cluster layout.

    Features 0-1 mix four unit-variance Gaussian clusters centered at
    (+-2, +-2); the label is +1 for the two centers whose coordinate
    product is positive, -1 otherwise, m/2 samples per class. Neither
    relevant feature correlates with the label on its own. Draw order:
    the two relevant columns' offsets, then the noise block.
    """
    if m < 8 or m % 2:
        raise ParameterError(f"m must be even and >= 8, got {m}")
    rng = np.random.default_rng(seed)
    half = m // 2
    centers = np.empty((m, 2))
    a, b = _split_counts(half)
    centers[:a] = (2.0, 2.0)
    centers[a:half] = (-2.0, -2.0)
    c, d = _split_counts(m - half)
    centers[half : half + c] = (2.0, -2.0)
    centers[half + c :] = (-2.0, 2.0)
    relevant = centers + rng.standard_normal((m, 2))
    noise = rng.standard_normal((m, N_NOISE))
    labels = np.concatenate([np.ones(half, dtype=np.int64), -np.ones(m - half, dtype=np.int64)])
    return Dataset(
        features=np.column_stack([relevant, noise]),
        labels=labels,
        label_type=LabelType.BINARY,
        feature_names=_feature_names(),
        provenance=f"synth:xor(m={m},seed={seed})",
    )


def synth_multiclass(m: int, seed: int = 0) -> Dataset:
    """Four equally sized Gaussian classes, three of them collinear.

    Class means on features 0-1 are (-4,0), (0,0), (4,0), (0,4) with unit
    variance. Draw order: relevant offsets, then noise.
    """
    if m < 8 or m % 4:
        raise ParameterError(f"m must be divisible by 4 and >= 8, got {m}")
    rng = np.random.default_rng(seed)
    per = m // 4
    means = np.array([(-4.0, 0.0), (0.0, 0.0), (4.0, 0.0), (0.0, 4.0)])
    centers = np.repeat(means, per, axis=0)
    relevant = centers + rng.standard_normal((m, 2))
    noise = rng.standard_normal((m, N_NOISE))
    labels = np.repeat(np.arange(4, dtype=np.int64), per)
    return Dataset(
        features=np.column_stack([relevant, noise]),
        labels=labels,
        label_type=LabelType.MULTICLASS,
        feature_names=_feature_names(),
        provenance=f"synth:multiclass(m={m},seed={seed})",
    )


def synth_regression(m: int, seed: int = 0) -> Dataset:
    """Nonlinear regression surface ``y = x0 * exp(-x0^2 - x1^2) + noise``.

    Features 0-1 are uniform on [-2, 2]^2 and the additive noise is
    N(0, 0.1^2). Draw order: the two uniform columns, the noise term,
    then the noise block.
    """
    if m < 8:
        raise ParameterError(f"m must be >= 8, got {m}")
    rng = np.random.default_rng(seed)
    relevant = rng.uniform(-2.0, 2.0, size=(m, 2))
    eps = rng.normal(0.0, 0.1, size=m)
    noise = rng.standard_normal((m, N_NOISE))
    y = relevant[:, 0] * np.exp(-relevant[:, 0] ** 2 - relevant[:, 1] ** 2) + eps
    return Dataset(
        features=np.column_stack([relevant, noise]),
        labels=y,
        label_type=LabelType.REAL,
        feature_names=_feature_names(),
        provenance=f"synth:regression(m={m},seed={seed})",
    )

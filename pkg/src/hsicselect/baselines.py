"""Per-feature comparison rankers: Pearson correlation and mutual information.

Both score features independently of each other (no interaction terms),
which is exactly the weakness the benchmark harness exposes on data
whose relevant features only matter jointly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, LabelType
from .errors import ParameterError


@dataclass
class ScoreVector:
    """Per-feature relevance scores; larger always means more relevant."""

    scores: np.ndarray
    method_name: str
    higher_is_more_relevant: bool = True

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if not np.all(np.isfinite(self.scores)):
            raise ParameterError("scores must be finite")

    def ranks(self) -> np.ndarray:
        """1-based relevance ranks (1 = most relevant).

        Ties resolve toward the smaller feature index on the
        less-relevant side, matching the selection algorithms'
        tie-breaking.
        """
        d = self.scores.size
        order = sorted(range(d), key=lambda j: (self.scores[j], j))  # ascending relevance
        ranks = np.empty(d, dtype=np.int64)
        for pos, j in enumerate(order):
            ranks[j] = d - pos
        return ranks


def _abs_corr(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return 0.0
    return abs(float(xc @ yc) / denom)


def pearson_rank(dataset: Dataset) -> ScoreVector:
    """Absolute Pearson correlation of each feature with the label.

    Binary labels are used as the numbers +/-1 and real labels as-is.
    Multiclass labels are handled through one-vs-rest class indicators,
    scoring each feature by its best single-class correlation (an
    extension beyond the plain two-class form, so the multiclass
    benchmark panel can include this ranker). Constant features score 0.
    """
    if dataset.n_samples < 3:
        raise ParameterError("pearson_rank needs at least 3 samples")
    x = dataset.features
    if dataset.label_type is LabelType.MULTICLASS:
        targets = [
            (dataset.labels == cls).astype(np.float64) for cls in np.unique(dataset.labels)
        ]
    else:
        targets = [dataset.labels.astype(np.float64)]
    scores = np.array(
        [max(_abs_corr(x[:, j], t) for t in targets) for j in range(dataset.n_features)]
    )
    return ScoreVector(scores=scores, method_name="pearson")


def _equal_frequency_bins(x: np.ndarray, n_bins: int) -> np.ndarray:
    # Rank-based assignment: stable sort, then split positions evenly.
    # Invariant under strictly monotone transforms of x.
    m = x.size
    order = np.argsort(x, kind="stable")
    bins = np.empty(m, dtype=np.int64)
    bins[order] = (np.arange(m) * n_bins) // m
    return bins


def _plugin_mi(a: np.ndarray, b: np.ndarray, n_a: int, n_b: int) -> float:
    m = a.size
    joint = np.zeros((n_a, n_b))
    np.add.at(joint, (a, b), 1.0)
    joint /= m
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    nz = joint > 0
    ratio = joint[nz] / np.outer(pa, pb)[nz]
    return max(0.0, float(np.sum(joint[nz] * np.log(ratio))))


def mutual_info_rank(dataset: Dataset, bins: int | None = None) -> ScoreVector:
    """Plug-in mutual information (nats) of each binned feature with the label.

    Features are discretized into ``min(10, ceil(sqrt(m)))``
    equal-frequency bins (override with ``bins``); class labels are used
    as-is and real labels get the same binning. No bias correction is
    applied; scores are clamped non-negative.
    """
    m = dataset.n_samples
    if m < 10:
        raise ParameterError("mutual_info_rank needs at least 10 samples")
    n_bins = bins if bins is not None else min(10, math.ceil(math.sqrt(m)))
    if n_bins < 2:
        raise ParameterError(f"need at least 2 bins, got {n_bins}")
    if dataset.label_type is LabelType.REAL:
        y = _equal_frequency_bins(dataset.labels.astype(np.float64), n_bins)
        n_y = n_bins
    else:
        _, y = np.unique(dataset.labels, return_inverse=True)
        n_y = int(y.max()) + 1
    scores = np.empty(dataset.n_features)
    for j in range(dataset.n_features):
        fx = _equal_frequency_bins(dataset.features[:, j], n_bins)
        scores[j] = _plugin_mi(fx, y, n_bins, n_y)
    return ScoreVector(scores=scores, method_name="mi")

"""Kernel matrix construction for data and labels.

All Gaussian kernels use the inverse-width parameterization
``k(x, x') = exp(-sigma * ||x - x'||^2)``, so a *larger* ``sigma`` means a
*narrower* kernel. The median heuristic is expressed in the same
convention: ``sigma = 1 / (2 * med**2)`` puts the kernel value at the
median pairwise distance at ``exp(-1/2)``.

Squared Euclidean distances decompose additively over feature
coordinates, which is what makes per-candidate kernel updates cheap
during greedy selection: removing feature ``j`` only requires
subtracting that coordinate's squared-difference matrix from the total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    ConventionError,
    DegenerateLabelsError,
    ParameterError,
    ShapeError,
)

SYMMETRY_TOL = 1e-12


class DiagonalConvention(Enum):
    """Whether a kernel matrix keeps its diagonal or zeroes it out."""

    ZERO_DIAGONAL = "zero"
    FULL_DIAGONAL = "full"


ZERO_DIAGONAL = DiagonalConvention.ZERO_DIAGONAL
FULL_DIAGONAL = DiagonalConvention.FULL_DIAGONAL


@dataclass
class KernelMatrix:
    """A symmetric m-by-m kernel matrix with an explicit diagonal convention.

    Parameters
    ----------
    values : ndarray of shape (m, m)
        Kernel evaluations. Must be symmetric to within ``1e-12``.
    convention : DiagonalConvention
        ``ZERO_DIAGONAL`` matrices have an exactly zero diagonal and are
        the form consumed by the unbiased dependence estimator;
        ``FULL_DIAGONAL`` matrices keep ``k(x_i, x_i)`` and are used by
        the biased estimator and the two-sample statistics.
    """

    values: np.ndarray
    convention: DiagonalConvention

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise ShapeError(f"kernel matrix must be square, got {self.values.shape}")
        asym = np.max(np.abs(self.values - self.values.T), initial=0.0)
        if asym > SYMMETRY_TOL:
            raise ShapeError(f"kernel matrix asymmetric: max |K - K^T| = {asym:g}")
        if self.convention is ZERO_DIAGONAL and np.any(np.diag(self.values) != 0.0):
            raise ConventionError("zero-diagonal kernel matrix has nonzero diagonal")

    @property
    def size(self) -> int:
        return self.values.shape[0]


def _apply_convention(values: np.ndarray, convention: DiagonalConvention) -> np.ndarray:
    if convention is ZERO_DIAGONAL:
        np.fill_diagonal(values, 0.0)
    return values


@dataclass
class DistanceDecomposition:
    """Squared-distance matrix maintained as a sum over active features.

    ``total[i, j]`` equals ``sum_{f in active} (X[i, f] - X[j, f])**2``.
    Per-feature squared-difference matrices are recomputed on demand from
    the stored columns instead of being cached, keeping memory at
    O(m^2 + m*d); callers that need a candidate's distance matrix combine
    ``total`` with :meth:`feature_distance`.

    Mutated only by :func:`remove_feature`; concurrent scorers must treat
    an instance as read-only.
    """

    columns: np.ndarray
    active: list[int] = field(default_factory=list)
    total: np.ndarray = None  # type: ignore[assignment]

    @classmethod
    def from_features(cls, features: np.ndarray) -> "DistanceDecomposition":
        """Build the decomposition over all columns of ``features``."""
        x = np.ascontiguousarray(np.asarray(features, dtype=np.float64))
        if x.ndim != 2 or x.shape[0] < 1:
            raise ParameterError(f"expected a nonempty m-by-d matrix, got {x.shape}")
        m, d = x.shape
        total = np.zeros((m, m))
        for j in range(d):
            total += _column_sqdist(x[:, j])
        return cls(columns=x, active=list(range(d)), total=total)

    def feature_distance(self, j: int) -> np.ndarray:
        """Squared-difference matrix of the single feature ``j``."""
        return _column_sqdist(self.columns[:, j])

    def remove(self, j: int) -> None:
        if j not in self.active:
            raise IndexError(f"feature {j} is not active")
        self.total -= self.feature_distance(j)
        # cancellation in the running sum can leave -1e-17-scale dust,
        # which would violate the non-negativity invariant downstream
        np.maximum(self.total, 0.0, out=self.total)
        self.active.remove(j)


def _column_sqdist(col: np.ndarray) -> np.ndarray:
    diff = col[:, None] - col[None, :]
    return diff * diff


def remove_feature(dist: DistanceDecomposition, j: int) -> DistanceDecomposition:
    """Drop feature ``j`` from the decomposition, updating the total in place.

    Raises ``IndexError`` if ``j`` is not active. Returns the mutated
    decomposition for convenience.
    """
    dist.remove(j)
    return dist


def gaussian_kernel_matrix(
    dist: DistanceDecomposition | np.ndarray,
    sigma: float,
    convention: DiagonalConvention = ZERO_DIAGONAL,
) -> KernelMatrix:
    """Gaussian kernel ``exp(-sigma * D_ij)`` from squared distances.

    ``dist`` may be a :class:`DistanceDecomposition` (its ``total`` is
    used) or a raw squared-distance matrix with zero diagonal and
    non-negative entries.
    """
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    d2 = dist.total if isinstance(dist, DistanceDecomposition) else np.asarray(dist, dtype=np.float64)
    if np.any(d2 < 0):
        raise ParameterError("squared-distance matrix has negative entries")
    values = np.exp(-sigma * d2)
    return KernelMatrix(_apply_convention(values, convention), convention)


def linear_kernel_matrix(
    data: np.ndarray, convention: DiagonalConvention = ZERO_DIAGONAL
) -> KernelMatrix:
    """Linear kernel: pairwise inner products of the rows of ``data``."""
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.size == 0 or x.shape[0] < 1:
        raise ParameterError("data matrix is empty")
    gram = x @ x.T
    gram = (gram + gram.T) / 2.0  # shave float asymmetry from BLAS
    return KernelMatrix(_apply_convention(gram, convention), convention)


def binary_label_matrix(
    labels: np.ndarray, convention: DiagonalConvention = ZERO_DIAGONAL
) -> KernelMatrix:
    """Signed two-class label kernel ``L_ij = rho(y_i) * rho(y_j)``.

    Positive samples get weight ``1/m_plus`` and negative samples
    ``-1/m_minus``, so the weights sum to zero over the sample and, with
    the full diagonal kept, ``L @ 1 == 0`` exactly. Labels must be coded
    as +1 / -1 with both classes present.
    """
    y = np.asarray(labels, dtype=np.float64).ravel()
    values = set(np.unique(y))
    if not values <= {-1.0, 1.0}:
        raise ParameterError(f"binary labels must be +/-1, got values {sorted(values)}")
    if len(values) < 2:
        raise DegenerateLabelsError("both classes must be present")
    m_pos = int(np.sum(y > 0))
    m_neg = y.size - m_pos
    rho = np.where(y > 0, 1.0 / m_pos, -1.0 / m_neg)
    return KernelMatrix(_apply_convention(np.outer(rho, rho), convention), convention)


def multiclass_label_matrix(
    labels: np.ndarray, convention: DiagonalConvention = ZERO_DIAGONAL
) -> KernelMatrix:
    """Multiclass label kernel ``L = Y @ Y.T`` from per-class weight rows.

    A sample in class ``i`` gets the row with ``1/m_i`` in column ``i``
    and ``1/(m_j - m)`` in every other column ``j``, where ``m_i`` is the
    size of class ``i`` and ``m`` the sample size; the pattern for three
    classes generalizes directly to any number of classes. Column sums of
    ``Y`` vanish, so the full-diagonal kernel satisfies ``L @ 1 == 0``.
    """
    y = np.asarray(labels).ravel()
    classes, inverse, counts = np.unique(y, return_inverse=True, return_counts=True)
    c = classes.size
    if c < 2:
        raise DegenerateLabelsError(f"need at least 2 classes, got {c}")
    m = y.size
    # Row template per class, then indexed by each sample's class.
    rows = np.empty((c, c))
    for i in range(c):
        rows[i] = 1.0 / (counts - m)
        rows[i, i] = 1.0 / counts[i]
    big_y = rows[inverse]
    values = big_y @ big_y.T
    values = (values + values.T) / 2.0
    return KernelMatrix(_apply_convention(values, convention), convention)


def regression_label_matrix(
    labels: np.ndarray,
    convention: DiagonalConvention = ZERO_DIAGONAL,
    sigma: float | None = None,
) -> KernelMatrix:
    """Gaussian kernel on real-valued labels with median-heuristic width.

    ``sigma`` overrides the heuristic when given. All-equal labels fall
    back to ``sigma = 1.0`` (producing a constant kernel) rather than
    failing, so pipelines survive pathological folds.
    """
    y = np.asarray(labels, dtype=np.float64).ravel()
    if y.size < 2:
        raise ParameterError("need at least 2 labels")
    if sigma is None:
        sigma = median_heuristic(y)
    d2 = _column_sqdist(y)
    return gaussian_kernel_matrix(d2, sigma, convention)


def median_heuristic(values: np.ndarray) -> float:
    """Inverse-width ``sigma = 1 / (2 * med^2)`` from pairwise distances.

    ``med`` is the median Euclidean distance over all sample pairs of
    ``values`` (one row per point; a 1-D array is treated as scalar
    points). Returns the fallback ``1.0`` when the median distance is
    zero (e.g. heavily duplicated points).
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    m = x.shape[0]
    if m < 2:
        raise ParameterError("median heuristic needs at least 2 points")
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    iu = np.triu_indices(m, k=1)
    med = float(np.median(np.sqrt(d2[iu])))
    if med == 0.0:
        return 1.0
    return 1.0 / (2.0 * med * med)


class LabelKernelVariant(Enum):
    BINARY = "binary"
    MULTICLASS = "multiclass"
    REGRESSION_RBF = "regression"
    PRECOMPUTED = "precomputed"


@dataclass
class LabelKernelSpec:
    """Recipe for building a label kernel matrix from a label vector.

    ``width`` applies to the ``REGRESSION_RBF`` variant only (``None``
    means the median heuristic); ``matrix`` supplies the values for the
    ``PRECOMPUTED`` variant.
    """

    variant: LabelKernelVariant
    width: float | None = None
    matrix: np.ndarray | None = None

    def build(self, labels: np.ndarray, convention: DiagonalConvention) -> KernelMatrix:
        if self.variant is LabelKernelVariant.BINARY:
            return binary_label_matrix(labels, convention)
        if self.variant is LabelKernelVariant.MULTICLASS:
            return multiclass_label_matrix(labels, convention)
        if self.variant is LabelKernelVariant.REGRESSION_RBF:
            return regression_label_matrix(labels, convention, sigma=self.width)
        if self.matrix is None:
            raise ParameterError("precomputed label kernel requires a matrix")
        vals = np.array(self.matrix, dtype=np.float64)
        return KernelMatrix(_apply_convention(vals, convention), convention)

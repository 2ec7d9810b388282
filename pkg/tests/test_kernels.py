import math

import numpy as np
import pytest

from hsicselect import (
    FULL_DIAGONAL,
    ZERO_DIAGONAL,
    ConventionError,
    DegenerateLabelsError,
    DistanceDecomposition,
    KernelMatrix,
    ParameterError,
    ShapeError,
    binary_label_matrix,
    gaussian_kernel_matrix,
    linear_kernel_matrix,
    median_heuristic,
    multiclass_label_matrix,
    regression_label_matrix,
    remove_feature,
)
from reference import scratch_sqdist


def toy_distances():
    d = np.array([[0.0, 2.0, 1.0], [2.0, 0.0, 0.5], [1.0, 0.5, 0.0]])
    return d


class TestKernelMatrix:
    def test_rejects_asymmetric(self):
        bad = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ShapeError):
            KernelMatrix(bad, ZERO_DIAGONAL)

    def test_rejects_nonzero_diag_for_zero_convention(self):
        with pytest.raises(ConventionError):
            KernelMatrix(np.eye(3), ZERO_DIAGONAL)

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            KernelMatrix(np.zeros((2, 3)), FULL_DIAGONAL)


class TestGaussianKernel:
    def test_full_diagonal_is_one(self):
        k = gaussian_kernel_matrix(toy_distances(), 0.7, FULL_DIAGONAL)
        assert np.all(np.diag(k.values) == 1.0)

    def test_zero_diagonal_is_zero(self):
        k = gaussian_kernel_matrix(toy_distances(), 0.7, ZERO_DIAGONAL)
        assert np.all(np.diag(k.values) == 0.0)

    def test_scalar_value(self):
        # D_12 = 2, sigma = 0.5 -> exp(-1), evaluated independently
        k = gaussian_kernel_matrix(toy_distances(), 0.5, FULL_DIAGONAL)
        assert k.values[0, 1] == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_symmetry_preserved(self):
        k = gaussian_kernel_matrix(toy_distances(), 1.3, FULL_DIAGONAL)
        assert np.array_equal(k.values, k.values.T)

    def test_entries_in_unit_interval(self):
        rng = np.random.default_rng(3)
        d2 = scratch_sqdist(rng.standard_normal((12, 4)), range(4))
        k = gaussian_kernel_matrix(d2, 2.5, FULL_DIAGONAL)
        assert np.all(k.values >= 0.0) and np.all(k.values <= 1.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_monotone_in_sigma(self, seed):
        rng = np.random.default_rng(seed)
        d2 = scratch_sqdist(rng.standard_normal((10, 3)), range(3))
        lo = gaussian_kernel_matrix(d2, 0.5, ZERO_DIAGONAL).values
        hi = gaussian_kernel_matrix(d2, 1.5, ZERO_DIAGONAL).values
        assert np.all(hi <= lo + 1e-15)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ParameterError):
            gaussian_kernel_matrix(toy_distances(), 0.0)
        with pytest.raises(ParameterError):
            gaussian_kernel_matrix(toy_distances(), -1.0)

    def test_rejects_negative_distances(self):
        bad = toy_distances()
        bad[0, 1] = bad[1, 0] = -0.5
        with pytest.raises(ParameterError):
            gaussian_kernel_matrix(bad, 1.0)


class TestLinearKernel:
    def test_all_ones_feature(self):
        k = linear_kernel_matrix(np.ones((4, 1)), ZERO_DIAGONAL)
        expected = np.ones((4, 4)) - np.eye(4)
        assert np.array_equal(k.values, expected)

    def test_zero_data(self):
        k = linear_kernel_matrix(np.zeros((3, 2)), FULL_DIAGONAL)
        assert np.all(k.values == 0.0)

    def test_hand_inner_product(self):
        k = linear_kernel_matrix(np.array([[1.0, 2.0], [3.0, -1.0]]), FULL_DIAGONAL)
        assert k.values[0, 1] == pytest.approx(1.0, abs=1e-15)  # 1*3 + 2*(-1)

    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            linear_kernel_matrix(np.zeros((0, 2)))


class TestBinaryLabelKernel:
    def test_balanced_weights_cancel(self):
        labels = np.array([1, 1, -1, -1])
        k = binary_label_matrix(labels, FULL_DIAGONAL)
        # rank-1 outer product of weights summing to zero
        assert np.max(np.abs(k.values @ np.ones(4))) < 1e-15

    def test_hand_values(self):
        k = binary_label_matrix(np.array([1, 1, -1]), FULL_DIAGONAL)
        assert k.values[0, 1] == pytest.approx(0.25, abs=1e-15)
        assert k.values[0, 2] == pytest.approx(-0.5, abs=1e-15)

    def test_rank_one(self):
        rng = np.random.default_rng(0)
        labels = np.where(rng.random(12) < 0.4, 1, -1)
        labels[0], labels[1] = 1, -1
        k = binary_label_matrix(labels, FULL_DIAGONAL)
        assert np.linalg.matrix_rank(k.values, tol=1e-10) == 1

    def test_row_sums_vanish_full_diagonal(self):
        labels = np.array([1, -1, -1, 1, 1])
        k = binary_label_matrix(labels, FULL_DIAGONAL)
        assert np.max(np.abs(k.values @ np.ones(5))) < 1e-12

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            binary_label_matrix(np.ones(5))

    def test_non_pm1_rejected(self):
        with pytest.raises(ParameterError):
            binary_label_matrix(np.array([0, 1, 0, 1]))


class TestMulticlassLabelKernel:
    def test_three_singleton_classes(self):
        k = multiclass_label_matrix(np.array([0, 1, 2]), FULL_DIAGONAL)
        expected = np.full((3, 3), -0.75)
        np.fill_diagonal(expected, 1.5)
        assert np.max(np.abs(k.values - expected)) < 1e-12

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            multiclass_label_matrix(np.zeros(6))

    def test_sample_permutation_equivariance(self):
        rng = np.random.default_rng(4)
        labels = rng.integers(0, 3, size=10)
        labels[:3] = [0, 1, 2]
        base = multiclass_label_matrix(labels, FULL_DIAGONAL).values
        perm = rng.permutation(10)
        permuted = multiclass_label_matrix(labels[perm], FULL_DIAGONAL).values
        assert np.max(np.abs(permuted - base[np.ix_(perm, perm)])) < 1e-12

    def test_row_sums_vanish_full_diagonal(self):
        labels = np.array([0, 0, 1, 2, 2, 2, 1])
        k = multiclass_label_matrix(labels, FULL_DIAGONAL)
        assert np.max(np.abs(k.values @ np.ones(7))) < 1e-12


class TestRegressionLabelKernel:
    def test_constant_labels_fall_back(self):
        k = regression_label_matrix(np.full(5, 3.3), FULL_DIAGONAL)
        off = k.values[~np.eye(5, dtype=bool)]
        assert np.all(off == off[0])

    def test_median_width_from_labels(self):
        # labels (0, 1, 2): median pairwise distance 1 -> sigma = 1/2
        k = regression_label_matrix(np.array([0.0, 1.0, 2.0]), FULL_DIAGONAL)
        assert k.values[0, 1] == pytest.approx(math.exp(-0.5), abs=1e-15)
        assert k.values[0, 2] == pytest.approx(math.exp(-2.0), abs=1e-15)

    def test_entries_in_unit_interval(self):
        rng = np.random.default_rng(8)
        k = regression_label_matrix(rng.standard_normal(20), FULL_DIAGONAL)
        assert np.all(k.values >= 0.0) and np.all(k.values <= 1.0)

    def test_too_few_labels(self):
        with pytest.raises(ParameterError):
            regression_label_matrix(np.array([1.0]))


class TestMedianHeuristic:
    def test_two_points(self):
        assert median_heuristic(np.array([0.0, 2.0])) == pytest.approx(1.0 / 8.0)

    def test_duplicates_fall_back(self):
        assert median_heuristic(np.zeros(6)) == 1.0

    def test_scaling(self):
        rng = np.random.default_rng(11)
        pts = rng.standard_normal((15, 2))
        base = median_heuristic(pts)
        scaled = median_heuristic(3.0 * pts)
        assert scaled == pytest.approx(base / 9.0, rel=1e-12)

    def test_needs_two_points(self):
        with pytest.raises(ParameterError):
            median_heuristic(np.array([1.0]))


class TestDistanceDecomposition:
    def test_total_matches_scratch(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((9, 5))
        decomp = DistanceDecomposition.from_features(x)
        assert np.max(np.abs(decomp.total - scratch_sqdist(x, range(5)))) < 1e-9

    def test_remove_matches_scratch(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal((7, 3))
        decomp = DistanceDecomposition.from_features(x)
        remove_feature(decomp, 1)
        assert decomp.active == [0, 2]
        assert np.max(np.abs(decomp.total - scratch_sqdist(x, [0, 2]))) < 1e-9

    def test_remove_sequence_stays_consistent(self):
        rng = np.random.default_rng(14)
        x = rng.standard_normal((8, 6))
        decomp = DistanceDecomposition.from_features(x)
        for j in (4, 0, 5):
            remove_feature(decomp, j)
            assert np.max(np.abs(decomp.total - scratch_sqdist(x, decomp.active))) < 1e-9

    def test_remove_all_gives_zero(self):
        x = np.random.default_rng(1).standard_normal((5, 2))
        decomp = DistanceDecomposition.from_features(x)
        remove_feature(decomp, 0)
        remove_feature(decomp, 1)
        assert np.max(np.abs(decomp.total)) < 1e-12

    def test_inactive_feature_raises(self):
        decomp = DistanceDecomposition.from_features(np.ones((4, 2)))
        remove_feature(decomp, 0)
        with pytest.raises(IndexError):
            remove_feature(decomp, 0)

    def test_diagonal_is_zero(self):
        decomp = DistanceDecomposition.from_features(
            np.random.default_rng(0).standard_normal((6, 3))
        )
        assert np.all(np.diag(decomp.total) == 0.0)
        assert np.all(decomp.total >= 0.0)

    def test_stays_usable_after_long_removal_sequence(self):
        # cancellation dust must not break non-negativity or the kernel builder
        rng = np.random.default_rng(20)
        x = np.column_stack([rng.standard_normal((10, 11)), 1e-9 * rng.standard_normal(10)])
        decomp = DistanceDecomposition.from_features(x)
        for j in range(11):
            remove_feature(decomp, j)
        assert np.all(decomp.total >= 0.0)
        gaussian_kernel_matrix(decomp, 1.0, ZERO_DIAGONAL)

"""Dependence estimators and significance tests.

The workhorse is the unbiased kernel dependence estimate computed from
zero-diagonal kernel matrices,

    value = [tr(KL) + (1'K1)(1'L1)/((m-1)(m-2)) - 2/(m-2) * 1'KL1] / (m(m-3)),

together with a brute-force U-statistic enumeration of the same quantity
(kept deliberately literal, as a cross-checking oracle), the biased
trace-of-centered-product variant, the asymptotic variance of the
U-statistic, and two significance tests (normal approximation and label
permutation). The two-sample statistic ``mmd_statistic`` and the
unnormalized alignment ``kta_unnormalized`` coincide with the scaled
biased estimate under the signed binary label kernel; tests pin down the
identity numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from itertools import permutations

import numpy as np

from . import _backend
from .errors import (
    ConventionError,
    DegenerateLabelsError,
    ParameterError,
    SampleSizeError,
    ShapeError,
)
from .kernels import (
    FULL_DIAGONAL,
    ZERO_DIAGONAL,
    KernelMatrix,
    LabelKernelSpec,
)

VARIANCE_EXACT_LIMIT = 200
ORACLE_SIZE_LIMIT = 12


class EstimatorMethod(Enum):
    UNBIASED = "unbiased"
    BIASED = "biased"
    USTAT_ORACLE = "ustat_oracle"


class SignificanceMode(Enum):
    ASYMPTOTIC = "asymptotic"
    PERMUTATION = "permutation"


@dataclass
class HsicEstimate:
    """A dependence estimate plus optional inference metadata."""

    value: float
    sample_size: int
    method: EstimatorMethod
    variance: float | None = None
    p_value: float | None = None

    def __post_init__(self):
        if self.variance is not None and self.variance < 0:
            raise ParameterError(f"variance must be >= 0, got {self.variance}")
        if self.p_value is not None and not 0.0 <= self.p_value <= 1.0:
            raise ParameterError(f"p-value must be in [0, 1], got {self.p_value}")
        if self.method is not EstimatorMethod.BIASED and self.sample_size < 4:
            raise SampleSizeError("unbiased estimates require at least 4 samples")


@dataclass
class SignificanceResult:
    """Outcome of a dependence significance test (one-sided)."""

    statistic: float
    p_value: float
    mode: SignificanceMode
    permutations: int | None = None
    seed: int | None = None


def _check_pair(k: KernelMatrix, l: KernelMatrix, convention, min_m: int) -> int:
    if k.size != l.size:
        raise ShapeError(f"kernel sizes differ: {k.size} vs {l.size}")
    if k.convention is not convention or l.convention is not convention:
        raise ConventionError(f"both matrices must be {convention.name}")
    if k.size < min_m:
        raise SampleSizeError(f"need at least {min_m} samples, got {k.size}")
    return k.size


def _unbiased_value(kv: np.ndarray, lv: np.ndarray) -> float:
    m = kv.shape[0]
    tr_kl = float(np.vdot(kv, lv))
    k_row = kv.sum(axis=1)
    l_row = lv.sum(axis=1)
    k_sum = float(k_row.sum())
    l_sum = float(l_row.sum())
    t3 = float(k_row @ l_row)
    return (tr_kl + k_sum * l_sum / ((m - 1) * (m - 2)) - 2.0 * t3 / (m - 2)) / (
        m * (m - 3)
    )


def hsic_unbiased(k: KernelMatrix, l: KernelMatrix) -> HsicEstimate:
    """Unbiased dependence estimate from zero-diagonal kernel matrices.

    O(m^2) arithmetic; requires m >= 4.
    """
    m = _check_pair(k, l, ZERO_DIAGONAL, 4)
    return HsicEstimate(
        value=_unbiased_value(k.values, l.values),
        sample_size=m,
        method=EstimatorMethod.UNBIASED,
    )


def hsic_ustat_oracle(
    k: KernelMatrix, l: KernelMatrix, max_size: int = ORACLE_SIZE_LIMIT
) -> HsicEstimate:
    """Brute-force U-statistic evaluation of the same dependence estimate.

    Averages the symmetrized order-4 kernel

        h(i,j,q,r) = (1/4!) * sum over ordered quadruples (s,t,u,v) of
                     K_st L_st + K_st L_uv - 2 K_st L_su

    over all ordered 4-tuples of distinct indices, exactly as defined.
    The O(m^4 * 4!) cost is intentional (no algebraic shortcuts): this is
    a test oracle, guarded to small m.
    """
    m = _check_pair(k, l, ZERO_DIAGONAL, 4)
    if m > max_size:
        raise ParameterError(
            f"oracle limited to m <= {max_size} (got {m}); use hsic_unbiased"
        )
    kv = k.values.tolist()
    lv = l.values.tolist()
    total = 0.0
    for tup in permutations(range(m), 4):
        acc = 0.0
        for s, t, u, v in permutations(tup):
            acc += kv[s][t] * lv[s][t] + kv[s][t] * lv[u][v] - 2.0 * kv[s][t] * lv[s][u]
        total += acc / 24.0
    pochhammer4 = m * (m - 1) * (m - 2) * (m - 3)
    return HsicEstimate(
        value=total / pochhammer4,
        sample_size=m,
        method=EstimatorMethod.USTAT_ORACLE,
    )


def hsic_biased(k: KernelMatrix, l: KernelMatrix) -> HsicEstimate:
    """Biased estimate ``tr(K H L H) / (m-1)^2`` from full-diagonal matrices.

    The centering matrix ``H = I - 11'/m`` is never materialized; the
    product is evaluated by double-centering one factor.
    """
    m = _check_pair(k, l, FULL_DIAGONAL, 2)
    lv = l.values
    centered = lv - lv.mean(axis=0, keepdims=True)
    centered -= centered.mean(axis=1, keepdims=True)
    value = float(np.vdot(k.values, centered)) / float((m - 1) ** 2)
    return HsicEstimate(value=value, sample_size=m, method=EstimatorMethod.BIASED)


def hsic_variance(
    k: KernelMatrix, l: KernelMatrix, max_size: int = VARIANCE_EXACT_LIMIT
) -> float:
    """Asymptotic variance of the unbiased estimate.

    Evaluates ``(16/m) * (R - value^2)`` where ``R`` averages, over each
    index i, the squared mean of the order-4 U-statistic kernel h over
    all ordered triples of the remaining indices. Exact (no sampling);
    clamped at 0 if rounding drives it negative. Enumeration cost grows
    like m^4, hence the size guard: beyond it, use ``permutation_test``.
    """
    m = _check_pair(k, l, ZERO_DIAGONAL, 4)
    if m > max_size:
        raise ParameterError(
            f"exact variance limited to m <= {max_size} (got {m}); "
            "use permutation_test for significance at this size"
        )
    row_sums = _backend.variance_row_sums(k.values, l.values)
    denom = (m - 1) * (m - 2) * (m - 3)
    r = float(np.mean((row_sums / denom) ** 2))
    value = _unbiased_value(k.values, l.values)
    return max(0.0, 16.0 / m * (r - value * value))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def asymptotic_p_value(est: HsicEstimate) -> SignificanceResult:
    """One-sided p-value from the normal approximation of the estimate.

    Requires ``est.variance`` to be present and positive (a zero/absent
    variance means the normal approximation is unavailable; use the
    permutation test instead).
    """
    if est.variance is None or est.variance <= 0.0:
        raise ParameterError("estimate has no positive variance; p-value unavailable")
    z = est.value / math.sqrt(est.variance)
    return SignificanceResult(
        statistic=est.value,
        p_value=_normal_sf(z),
        mode=SignificanceMode.ASYMPTOTIC,
    )


def permutation_test(
    k: KernelMatrix,
    label_builder: LabelKernelSpec,
    labels: np.ndarray,
    n_permutations: int = 999,
    seed: int = 0,
) -> SignificanceResult:
    """Permutation significance test for dependence between ``k`` and labels.

    The observed statistic is the unbiased estimate against the label
    kernel built from ``labels``; the null resamples label order. Since
    every shipped label kernel depends only on the label values (class
    sizes and pairwise label distances are permutation invariant),
    rebuilding the kernel from permuted labels equals jointly permuting
    the rows/columns of the precomputed kernel, which is how the null
    draws are evaluated. p = (1 + #{permuted >= observed}) / (B + 1).

    The permutation stream is pre-generated from the seed, so results do
    not depend on evaluation order.
    """
    if n_permutations < 19:
        raise ParameterError(f"need at least 19 permutations, got {n_permutations}")
    y = np.asarray(labels)
    label_kernel = label_builder.build(y, ZERO_DIAGONAL)
    observed = hsic_unbiased(k, label_kernel)
    m = k.size
    rng = np.random.default_rng(seed)
    perms = [rng.permutation(m) for _ in range(n_permutations)]
    kv = k.values
    lv = label_kernel.values
    exceed = 0
    for perm in perms:
        permuted = lv[np.ix_(perm, perm)]
        if _unbiased_value(kv, permuted) >= observed.value:
            exceed += 1
    return SignificanceResult(
        statistic=observed.value,
        p_value=(1.0 + exceed) / (n_permutations + 1.0),
        mode=SignificanceMode.PERMUTATION,
        permutations=n_permutations,
        seed=seed,
    )


def with_variance(est: HsicEstimate, k: KernelMatrix, l: KernelMatrix) -> HsicEstimate:
    """Copy of ``est`` with the exact asymptotic variance filled in."""
    return replace(est, variance=hsic_variance(k, l))


def mmd_statistic(k: KernelMatrix, labels: np.ndarray) -> float:
    """Squared mean discrepancy between the two class-conditional samples.

    Computed by the three-block sum over a full-diagonal data kernel:
    within-positive, within-negative, and cross-class averages. Equal to
    ``kta_unnormalized(k, binary label kernel)``.
    """
    if k.convention is not FULL_DIAGONAL:
        raise ConventionError("mmd_statistic requires a FULL_DIAGONAL kernel")
    y = np.asarray(labels, dtype=np.float64).ravel()
    if y.size != k.size:
        raise ShapeError(f"label length {y.size} != kernel size {k.size}")
    pos = y > 0
    neg = ~pos
    m_pos = int(pos.sum())
    m_neg = int(neg.sum())
    if m_pos == 0 or m_neg == 0:
        raise DegenerateLabelsError("both classes must be present")
    kv = k.values
    within_pos = float(kv[np.ix_(pos, pos)].sum())
    within_neg = float(kv[np.ix_(neg, neg)].sum())
    cross = float(kv[np.ix_(pos, neg)].sum())
    return (
        within_pos / m_pos**2 + within_neg / m_neg**2 - 2.0 * cross / (m_pos * m_neg)
    )


def kta_unnormalized(k: KernelMatrix, l: KernelMatrix) -> float:
    """Unnormalized kernel alignment ``tr(KL)``."""
    if k.size != l.size:
        raise ShapeError(f"kernel sizes differ: {k.size} vs {l.size}")
    return float(np.vdot(k.values, l.values.T))

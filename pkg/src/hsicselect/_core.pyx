# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the performance-critical kernels.

Same interface as ``hsicselect._core_py`` (the NumPy fallback). Candidate
scoring fuses the distance update, the Gaussian map and the estimator
accumulation into one pass so no per-candidate kernel matrix is ever
materialized; the variance statistic enumerates the U-statistic kernel
over index triples directly.
"""

from libc.math cimport exp

import numpy as np


def gaussian_candidate_scores(
    double[:, ::1] total,
    double[:, ::1] cols,
    int sign,
    double sigma,
    double[:, ::1] label,
    double[::1] l_row,
    double l_sum,
):
    """Unbiased HSIC for each candidate's Gaussian kernel.

    Candidate ``t`` uses squared distances ``total + sign * sqdiff(cols[:, t])``;
    ``sign=-1`` scores removal of a feature, ``sign=+1`` addition.
    """
    cdef Py_ssize_t m = total.shape[0]
    cdef Py_ssize_t n_cand = cols.shape[1]
    out = np.empty(n_cand)
    cdef double[::1] out_v = out
    krow_arr = np.empty(m)
    cdef double[::1] krow = krow_arr
    cdef Py_ssize_t t, i, j
    cdef double diff, kij, tr_kl, k_sum, t3, s

    for t in range(n_cand):
        tr_kl = 0.0
        for i in range(m):
            krow[i] = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                diff = cols[i, t] - cols[j, t]
                kij = exp(-sigma * (total[i, j] + sign * diff * diff))
                tr_kl += 2.0 * kij * label[i, j]
                krow[i] += kij
                krow[j] += kij
        k_sum = 0.0
        t3 = 0.0
        for i in range(m):
            k_sum += krow[i]
            t3 += krow[i] * l_row[i]
        s = tr_kl + k_sum * l_sum / ((m - 1) * (m - 2)) - 2.0 * t3 / (m - 2)
        out_v[t] = s / (m * (m - 3))
    return out


def linear_candidate_scores(
    double[:, ::1] gram,
    double[:, ::1] cols,
    int sign,
    double[:, ::1] label,
    double[::1] l_row,
    double l_sum,
):
    """Unbiased HSIC per candidate for a linear kernel Gram decomposition."""
    cdef Py_ssize_t m = gram.shape[0]
    cdef Py_ssize_t n_cand = cols.shape[1]
    out = np.empty(n_cand)
    cdef double[::1] out_v = out
    krow_arr = np.empty(m)
    cdef double[::1] krow = krow_arr
    cdef Py_ssize_t t, i, j
    cdef double kij, tr_kl, k_sum, t3, s

    for t in range(n_cand):
        tr_kl = 0.0
        for i in range(m):
            krow[i] = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                kij = gram[i, j] + sign * cols[i, t] * cols[j, t]
                tr_kl += 2.0 * kij * label[i, j]
                krow[i] += kij
                krow[j] += kij
        k_sum = 0.0
        t3 = 0.0
        for i in range(m):
            k_sum += krow[i]
            t3 += krow[i] * l_row[i]
        s = tr_kl + k_sum * l_sum / ((m - 1) * (m - 2)) - 2.0 * t3 / (m - 2)
        out_v[t] = s / (m * (m - 3))
    return out


cdef inline double _h_set(
    double[:, ::1] K, double[:, ::1] L, Py_ssize_t a, Py_ssize_t b,
    Py_ssize_t c, Py_ssize_t d,
) noexcept:
    # Symmetrized order-4 kernel evaluated on the index set {a, b, c, d}:
    # average over the 24 ordered quadruples of
    #   K_st L_st + K_st L_uv - 2 K_st L_su
    # collected into pair (P1), pair-split (P2) and shared-index (P3) sums.
    cdef double p1, p2, p3
    cdef double ks, ls, ms
    p1 = (
        K[a, b] * L[a, b] + K[a, c] * L[a, c] + K[a, d] * L[a, d]
        + K[b, c] * L[b, c] + K[b, d] * L[b, d] + K[c, d] * L[c, d]
    )
    p2 = (
        K[a, b] * L[c, d] + K[c, d] * L[a, b]
        + K[a, c] * L[b, d] + K[b, d] * L[a, c]
        + K[a, d] * L[b, c] + K[b, c] * L[a, d]
    )
    p3 = 0.0
    ks = K[a, b] + K[a, c] + K[a, d]
    ls = L[a, b] + L[a, c] + L[a, d]
    ms = K[a, b] * L[a, b] + K[a, c] * L[a, c] + K[a, d] * L[a, d]
    p3 += ks * ls - ms
    ks = K[b, a] + K[b, c] + K[b, d]
    ls = L[b, a] + L[b, c] + L[b, d]
    ms = K[b, a] * L[b, a] + K[b, c] * L[b, c] + K[b, d] * L[b, d]
    p3 += ks * ls - ms
    ks = K[c, a] + K[c, b] + K[c, d]
    ls = L[c, a] + L[c, b] + L[c, d]
    ms = K[c, a] * L[c, a] + K[c, b] * L[c, b] + K[c, d] * L[c, d]
    p3 += ks * ls - ms
    ks = K[d, a] + K[d, b] + K[d, c]
    ls = L[d, a] + L[d, b] + L[d, c]
    ms = K[d, a] * L[d, a] + K[d, b] * L[d, b] + K[d, c] * L[d, c]
    p3 += ks * ls - ms
    return (4.0 * p1 + 4.0 * p2 - 2.0 * p3) / 24.0


def variance_row_sums(double[:, ::1] kern, double[:, ::1] label):
    """Per-index sums ``T_i`` of the order-4 U-statistic kernel ``h``.

    Enumerates, for each ``i``, every unordered triple ``{j, q, r}`` of
    the remaining indices (each stands for 3! ordered triples since ``h``
    is symmetric). O(m^4) time.
    """
    cdef Py_ssize_t m = kern.shape[0]
    out = np.empty(m)
    cdef double[::1] out_v = out
    cdef Py_ssize_t i, j, q, r
    cdef double acc

    for i in range(m):
        acc = 0.0
        for j in range(m):
            if j == i:
                continue
            for q in range(j + 1, m):
                if q == i:
                    continue
                for r in range(q + 1, m):
                    if r == i:
                        continue
                    acc += _h_set(kern, label, i, j, q, r)
        out_v[i] = 6.0 * acc
    return out

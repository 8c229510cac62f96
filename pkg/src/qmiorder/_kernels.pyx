# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cost kernels for evaluating many orderings of one QMI matrix.

Signatures match :mod:`qmiorder._kernels_py`. ``perm[p]`` is the original
site placed at chain position ``p``.
"""

import numpy as np
from libc.math cimport exp2, log2, pow

ctypedef Py_ssize_t intp


cdef double _idist(const double[:, ::1] Q, const intp[::1] perm, double eta) nogil:
    cdef intp L = perm.shape[0]
    cdef intp p, q
    cdef double total = 0.0
    for p in range(L):
        for q in range(p + 1, L):
            total += Q[perm[p], perm[q]] * pow(<double>(q - p), eta)
    return 2.0 * total


cdef double _block(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm,
                   intp start, intp stop) nogil:
    cdef intp n = stop - start
    cdef intp k, delta
    cdef double total = 0.0, inv_c = 0.0, corr = 0.0, part
    for k in range(start, stop):
        total += S[perm[k]]
    if n < 2:
        return total
    for delta in range(1, n // 2 + 1):
        inv_c += 1.0 / (<double>delta * delta)
        part = 0.0
        for k in range(start, stop - delta):
            part += Q[perm[k], perm[k + delta]]
        corr += part / (<double>delta * delta)
    return total - corr / inv_c


cdef double _lse2(const double[::1] v) nogil:
    cdef intp n = v.shape[0]
    cdef intp k
    cdef double top = v[0], acc = 0.0
    for k in range(1, n):
        if v[k] > top:
            top = v[k]
    for k in range(n):
        acc += exp2(v[k] - top)
    return top + log2(acc)


def idist_perm(const double[:, ::1] Q, const intp[::1] perm, double eta, int sign):
    return sign * _idist(Q, perm, eta)


def block_estimate(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm,
                   intp start, intp stop):
    return _block(Q, S, perm, start, stop)


def i_hat_perm(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm):
    cdef intp L = perm.shape[0]
    out = np.empty(L - 1)
    cdef double[::1] o = out
    cdef intp j
    with nogil:
        for j in range(1, L):
            o[j - 1] = _block(Q, S, perm, 0, j)
    return out


def i_mps_perm(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm):
    cdef double[::1] hats = i_hat_perm(Q, S, perm)
    return _lse2(hats)


def i_mps_check_perm(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm):
    cdef intp L = perm.shape[0]
    cdef intp j
    cdef double best = _block(Q, S, perm, 0, 1), v
    for j in range(2, L):
        v = _block(Q, S, perm, 0, j)
        if v > best:
            best = v
    return best


def i_tree_perm(const double[:, ::1] Q, const double[::1] S, const intp[::1] perm):
    cdef intp L = perm.shape[0]
    cdef intp size = 2, i, count = 0
    values = np.empty(L - 2)
    cdef double[::1] v = values
    while size < L:
        for i in range(L // size):
            v[count] = _block(Q, S, perm, size * i, size * (i + 1))
            count += 1
        size *= 2
    return _lse2(v[:count])

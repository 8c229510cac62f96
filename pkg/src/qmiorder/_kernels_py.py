"""NumPy fallback for the compiled cost kernels in ``_kernels.pyx``.

Same signatures and the same arithmetic, vectorized over diagonals of the
relabeled QMI matrix instead of looping in C.
"""

from __future__ import annotations

import numpy as np


def idist_perm(Q, perm, eta, sign):
    Qp = Q[np.ix_(perm, perm)]
    L = perm.shape[0]
    total = 0.0
    for delta in range(1, L):
        total += np.diagonal(Qp, delta).sum() * float(delta) ** eta
    return sign * 2.0 * total


def block_estimate(Q, S, perm, start, stop):
    idx = perm[start:stop]
    total = float(S[idx].sum())
    n = stop - start
    if n < 2:
        return total
    Qp = Q[np.ix_(idx, idx)]
    inv_c = 0.0
    corr = 0.0
    for delta in range(1, n // 2 + 1):
        inv_c += 1.0 / (delta * delta)
        corr += np.diagonal(Qp, delta).sum() / (delta * delta)
    return total - corr / inv_c


def i_hat_perm(Q, S, perm):
    L = perm.shape[0]
    Qp = Q[np.ix_(perm, perm)]
    cumS = np.cumsum(S[perm])
    # running[delta][m] = sum of the first m entries of the delta-th superdiagonal
    running = [None] + [
        np.concatenate(([0.0], np.cumsum(np.diagonal(Qp, delta)))) for delta in range(1, L // 2 + 1)
    ]
    out = np.empty(L - 1)
    out[0] = cumS[0]
    for j in range(2, L):
        inv_c = 0.0
        corr = 0.0
        for delta in range(1, j // 2 + 1):
            inv_c += 1.0 / (delta * delta)
            corr += running[delta][j - delta] / (delta * delta)
        out[j - 1] = cumS[j - 1] - corr / inv_c
    return out


def _lse2(v):
    top = v.max()
    return float(top + np.log2(np.sum(np.exp2(v - top))))


def i_mps_perm(Q, S, perm):
    return _lse2(i_hat_perm(Q, S, perm))


def i_mps_check_perm(Q, S, perm):
    return float(i_hat_perm(Q, S, perm).max())


def i_tree_perm(Q, S, perm):
    L = perm.shape[0]
    values = []
    size = 2
    while size < L:
        for i in range(L // size):
            values.append(block_estimate(Q, S, perm, size * i, size * (i + 1)))
        size *= 2
    return _lse2(np.array(values))

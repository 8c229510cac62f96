"""Entropies, mutual information and truncation-error bounds, all in bits."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import (
    RANK_CUTOFF,
    DenseState,
    DensityMatrix,
    reduced_density,
    schmidt,
    site_subset,
    tail_weight,
)

QMI_NEGATIVE_TOL = 1e-9


def entropy(probabilities, alpha: float = 1.0) -> float:
    """Renyi entropy of a probability vector in bits.

    ``alpha=0`` is the Hartley entropy (log of the number of entries above
    the rank cutoff), ``alpha=1`` the Shannon/von Neumann limit.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    p = np.asarray(probabilities, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValueError("empty probability vector")
    if p.min() < -1e-10:
        raise ValueError(f"probability vector has negative entry {p.min()!r}")
    total = p.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    p = np.clip(p, 0.0, None) / total
    p = p[p > RANK_CUTOFF]
    if alpha == 0:
        return float(np.log2(p.size))
    if alpha == 1:
        return float(-np.sum(p * np.log2(p)))
    return float(np.log2(np.sum(p**alpha)) / (1.0 - alpha))


def entropy_of_density(rho: DensityMatrix, alpha: float = 1.0) -> float:
    return entropy(rho.eigenvalues, alpha)


def site_entropy(state: DenseState, sites: Sequence[int], alpha: float = 1.0) -> float:
    """Entropy of the reduced state on ``sites``.

    Contiguous prefixes and suffixes go through the Schmidt decomposition;
    everything else through an explicit reduced density matrix.
    """
    sites = site_subset(sites, state.L)
    n = len(sites)
    if n == state.L:
        return 0.0
    if sites == tuple(range(n)):
        return entropy(schmidt(state, n).probabilities, alpha)
    if sites == tuple(range(state.L - n, state.L)):
        return entropy(schmidt(state, state.L - n).probabilities, alpha)
    return entropy_of_density(reduced_density(state, sites), alpha)


def single_site_entropies(state: DenseState, alpha: float = 1.0) -> np.ndarray:
    return np.array([site_entropy(state, [k], alpha) for k in range(state.L)])


def block_entropy(state: DenseState, j: int, alpha: float = 1.0) -> float:
    """Entropy of the first ``j`` sites, from the Schmidt values at cut ``j``."""
    return entropy(schmidt(state, j).probabilities, alpha)


def block_entropies(state: DenseState, alpha: float = 1.0) -> np.ndarray:
    return np.array([block_entropy(state, j, alpha) for j in range(1, state.L)])


def qmi(state: DenseState, i: int, j: int, alpha: float = 1.0) -> float:
    """Two-site mutual information ``S_i + S_j - S_ij``.

    For ``alpha=1`` a value below ``-1e-9`` means the inputs are broken and
    raises; for other ``alpha`` the raw difference is returned, sign and all.
    """
    if i == j:
        raise ValueError("mutual information needs two distinct sites")
    for k in (i, j):
        if not 0 <= k < state.L:
            raise ValueError(f"site {k} out of range for L={state.L}")
    value = (
        site_entropy(state, [i], alpha)
        + site_entropy(state, [j], alpha)
        - site_entropy(state, [i, j], alpha)
    )
    if alpha == 1 and value < -QMI_NEGATIVE_TOL:
        raise ArithmeticError(f"negative mutual information {value!r} between sites {i}, {j}")
    return value


def block_qmi(state: DenseState, A: Sequence[int], B: Sequence[int]) -> float:
    """von Neumann mutual information between two disjoint site subsets."""
    A = site_subset(A, state.L)
    B = site_subset(B, state.L)
    if set(A) & set(B):
        raise ValueError(f"subsets {A} and {B} overlap")
    return site_entropy(state, A) + site_entropy(state, B) - site_entropy(state, A + B)


def _matrix_log2(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    logs = np.log2(np.where(w > 0, w, 1.0))
    return (v * logs) @ v.conj().T


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix, regularization: float = 1e-10) -> float:
    """``tr rho (log2 rho - log2 sigma)``.

    ``sigma`` is mixed with a little of the maximally mixed state so that a
    rank-deficient reference does not produce ``log 0``.
    """
    if rho.dim != sigma.dim:
        raise ValueError("relative entropy needs operators of equal size")
    n = sigma.dim
    sig = (1.0 - regularization) * sigma.matrix + regularization * np.eye(n) / n
    r = rho.matrix
    value = np.trace(r @ (_matrix_log2(r) - _matrix_log2(sig)))
    return float(value.real)


# -- QMI matrices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QmiMatrix:
    """Symmetric matrix of pairwise mutual informations, zero diagonal."""

    entries: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        Q = np.array(self.entries, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] < 2:
            raise ValueError(f"QMI matrix must be square with L >= 2, got shape {Q.shape}")
        if np.max(np.abs(Q - Q.T)) > 1e-10:
            raise ValueError("QMI matrix is not symmetric")
        if np.any(np.diag(Q) != 0.0):
            raise ValueError("QMI matrix must have an exactly zero diagonal")
        if self.alpha == 1:
            if Q.min() < -QMI_NEGATIVE_TOL:
                raise ValueError(f"QMI matrix has negative entry {Q.min()!r}")
            Q = np.clip(Q, 0.0, None)
        Q = 0.5 * (Q + Q.T)
        Q.flags.writeable = False
        object.__setattr__(self, "entries", Q)

    @property
    def L(self) -> int:
        return self.entries.shape[0]

    def relabel(self, perm) -> "QmiMatrix":
        """Matrix seen from a chain whose position ``p`` holds site ``perm[p]``."""
        perm = np.asarray(perm, dtype=np.intp)
        return QmiMatrix(self.entries[np.ix_(perm, perm)], self.alpha)

    def to_json(self) -> dict:
        return {"L": self.L, "alpha": self.alpha, "unit": "bits", "entries": self.entries.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "QmiMatrix":
        Q = cls(np.array(doc["entries"], dtype=float), float(doc.get("alpha", 1.0)))
        if "L" in doc and int(doc["L"]) != Q.L:
            raise ValueError(f"QMI document declares L={doc['L']} but has {Q.L} rows")
        return Q

    def to_csv(self) -> str:
        return "".join(",".join(format(x, ".17g") for x in row) + "\n" for row in self.entries)

    @classmethod
    def from_csv(cls, text: str, alpha: float = 1.0) -> "QmiMatrix":
        rows = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
        return cls(np.array([[float(x) for x in r.split(",")] for r in rows]), alpha)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def qmi_matrix(state: DenseState, alpha: float = 1.0) -> QmiMatrix:
    L = state.L
    singles = single_site_entropies(state, alpha)
    Q = np.zeros((L, L))
    for i in range(L):
        for j in range(i + 1, L):
            value = singles[i] + singles[j] - site_entropy(state, [i, j], alpha)
            if alpha == 1 and value < -QMI_NEGATIVE_TOL:
                raise ArithmeticError(
                    f"negative mutual information {value!r} between sites {i}, {j}"
                )
            Q[i, j] = Q[j, i] = value
    return QmiMatrix(Q, alpha)


@dataclass(frozen=True)
class EntropyProfile:
    single_site: np.ndarray
    blocks: np.ndarray
    alpha: float


def entropy_profile(state: DenseState, alpha: float = 1.0) -> EntropyProfile:
    return EntropyProfile(single_site_entropies(state, alpha), block_entropies(state, alpha), alpha)


# -- truncation error bounds ----------------------------------------------------


def simbound(chi: int, alpha: float, renyi_entropy: float) -> float:
    """Entropy bound on the truncation error ``eps_j(chi)`` at one cut.

    For ``0 < alpha < 1`` the result is an upper bound, for ``alpha > 1`` a
    lower bound. Here ``eps_j(chi)`` is the norm of the discarded part, i.e.
    the square root of the discarded Schmidt weight.
    """
    if chi < 1:
        raise ValueError(f"bond dimension must be >= 1, got {chi}")
    if alpha <= 0 or alpha == 1:
        raise ValueError(
            "entropy bounds on the truncation error exist only for alpha in (0, 1) or alpha > 1"
        )
    if alpha < 1:
        return (chi / (1.0 - alpha)) ** ((alpha - 1.0) / alpha) * 2.0 ** (
            (1.0 - alpha) / alpha * renyi_entropy
        )
    return 1.0 - chi ** ((alpha - 1.0) / alpha) * 2.0 ** (-(alpha - 1.0) / alpha * renyi_entropy)


def truncation_norm(probabilities, chi: int) -> float:
    """``eps_j(chi)``: norm of the part dropped when keeping ``chi`` values."""
    p = np.sort(np.asarray(probabilities, dtype=float))[::-1]
    return float(np.sqrt(max(tail_weight(np.sqrt(np.clip(p, 0.0, None)), chi), 0.0)))

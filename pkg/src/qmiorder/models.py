"""Ground states of small open spin chains by dense diagonalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .states import DenseState

MAX_SITES = 12

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Y = np.array([[0.0, -1j], [1j, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])

MODELS = ("tfim", "xxz", "heisenberg")


@dataclass(frozen=True)
class HamiltonianSpec:
    """Nearest-neighbour qubit chain with open boundaries.

    ``tfim``:  H = -J sum Z_k Z_{k+1} - g sum X_k - h sum Z_k
    ``xxz``:   H =  J sum (X_k X_{k+1} + Y_k Y_{k+1} + delta Z_k Z_{k+1}) - h sum Z_k
    ``heisenberg`` is ``xxz`` with ``delta = 1``.
    """

    model: str
    L: int
    J: float = 1.0
    g: float = 1.0
    h: float = 0.0
    delta: float = 1.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if self.L < 2:
            raise ValueError(f"need L >= 2, got {self.L}")
        if self.L > MAX_SITES:
            raise ValueError(
                f"L={self.L} is too large for dense diagonalization (max {MAX_SITES})"
            )


def _embed(ops: dict, L: int) -> np.ndarray:
    out = np.ones((1, 1))
    for k in range(L):
        out = np.kron(out, ops.get(k, np.eye(2)))
    return out


def hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    L = spec.L
    H = np.zeros((2**L, 2**L), dtype=complex)
    if spec.model == "tfim":
        for k in range(L - 1):
            H -= spec.J * _embed({k: _Z, k + 1: _Z}, L)
        for k in range(L):
            H -= spec.g * _embed({k: _X}, L)
    else:
        delta = 1.0 if spec.model == "heisenberg" else spec.delta
        for k in range(L - 1):
            H += spec.J * _embed({k: _X, k + 1: _X}, L)
            H += spec.J * _embed({k: _Y, k + 1: _Y}, L)
            H += spec.J * delta * _embed({k: _Z, k + 1: _Z}, L)
    for k in range(L):
        H -= spec.h * _embed({k: _Z}, L)
    if not np.iscomplexobj(H) or np.max(np.abs(H.imag)) == 0.0:
        H = H.real
    return H


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest amplitude is real and positive.

    Near-ties in magnitude go to the lowest index.
    """
    mags = np.abs(vec)
    pivot = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return vec * (abs(vec[pivot]) / vec[pivot])


def make_ground_state(spec: HamiltonianSpec, degeneracy_tol: float = 1e-9) -> DenseState:
    """Lowest eigenvector of the dense Hamiltonian.

    If the ground level is degenerate, the returned state is the normalized
    projection onto the ground space of the computational basis state with
    the largest overlap (lowest index on ties). For the classical Ising chain
    this picks ``|0...0>`` rather than an arbitrary cat state.
    """
    H = hamiltonian(spec)
    n = H.shape[0]
    top = min(n - 1, 15)
    evals, evecs = scipy.linalg.eigh(H, subset_by_index=[0, top])
    ground = evecs[:, np.abs(evals - evals[0]) <= degeneracy_tol]
    if ground.shape[1] == 1:
        vec = ground[:, 0]
    else:
        weights = np.sum(np.abs(ground) ** 2, axis=1)
        pivot = int(np.flatnonzero(weights >= weights.max() - 1e-12)[0])
        vec = ground @ ground[pivot].conj()
    vec = fix_phase(vec / np.linalg.norm(vec))
    return DenseState(spec.L, 2, vec, f"ground-{spec.model}")

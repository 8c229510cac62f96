"""Dense pure states on a chain of qudits, and what can be done to them.

Amplitudes are stored flat with site 0 slowest-varying, so the amplitude of
basis state ``|s_0 s_1 ... s_{L-1}>`` sits at index ``sum_k s_k d**(L-1-k)``.
With that convention the bipartition after the first ``j`` sites is simply
``amplitudes.reshape(d**j, d**(L-j))``.

Site indices in this package are 0-based. Cuts are labelled by the number of
sites in the left block, ``j = 1 .. L-1``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

DEFAULT_MAX_AMPLITUDES = 2**20
BUDGET_ENV = "QMIORDER_MAX_AMPLITUDES"

NORM_TOL = 1e-9
RANK_CUTOFF = 1e-12


class BudgetError(ValueError):
    """Raised when a dense object would exceed the amplitude budget."""


def amplitude_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    if value is None:
        return DEFAULT_MAX_AMPLITUDES
    try:
        budget = int(value)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {value!r}") from None
    if budget < 4:
        raise ValueError(f"{BUDGET_ENV} must be at least 4")
    return budget


def check_budget(size: int, what: str = "state") -> None:
    budget = amplitude_budget()
    if size > budget:
        raise BudgetError(
            f"{what} needs {size} amplitudes, over the budget of {budget} "
            f"(raise it with {BUDGET_ENV})"
        )


@dataclass(frozen=True, eq=False)
class DenseState:
    """Normalized pure state of ``L`` sites with local dimension ``d``.

    ``kind`` records which generator produced the state; verification code
    uses it to refuse checks that only make sense for a given family.
    """

    L: int
    d: int
    amplitudes: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"need at least 2 sites, got L={self.L}")
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got d={self.d}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.d**self.L:
            raise ValueError(
                f"expected {self.d ** self.L} amplitudes for L={self.L}, d={self.d}, "
                f"got {amps.size}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, L: int, d: int, vector, kind: str = "generic") -> "DenseState":
        """Build a state from an unnormalized vector."""
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ValueError("zero vector cannot be normalized")
        return cls(L, d, vec / norm, kind)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.L)

    def with_kind(self, kind: str) -> "DenseState":
        return DenseState(self.L, self.d, self.amplitudes, kind)


@dataclass(frozen=True, eq=False)
class MatrixProductState:
    """Open-boundary MPS; core ``k`` has shape ``(chi[k], d, chi[k+1])``."""

    L: int
    d: int
    cores: tuple

    def __post_init__(self):
        cores = tuple(np.asarray(c, dtype=complex) for c in self.cores)
        if len(cores) != self.L:
            raise ValueError(f"expected {self.L} cores, got {len(cores)}")
        for k, core in enumerate(cores):
            if core.ndim != 3 or core.shape[1] != self.d:
                raise ValueError(f"core {k} has shape {core.shape}, expected (a, {self.d}, b)")
            if k > 0 and cores[k - 1].shape[2] != core.shape[0]:
                raise ValueError(f"bond mismatch between cores {k - 1} and {k}")
        if cores[0].shape[0] != 1 or cores[-1].shape[2] != 1:
            raise ValueError("open boundary conditions need outer bond dimensions of 1")
        object.__setattr__(self, "cores", cores)

    @property
    def bond_dims(self) -> tuple[int, ...]:
        return (1,) + tuple(c.shape[2] for c in self.cores)

    def to_vector(self) -> np.ndarray:
        """Contract the chain to a flat amplitude vector (not renormalized)."""
        check_budget(self.d**self.L)
        out = self.cores[0].reshape(self.d, -1)
        for core in self.cores[1:]:
            out = (out @ core.reshape(core.shape[0], -1)).reshape(-1, core.shape[2])
        return out.reshape(-1)


@dataclass(frozen=True)
class SchmidtSpectrum:
    values: np.ndarray
    cut: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.values**2

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.values > RANK_CUTOFF))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density operator on a product of subsystems.

    ``dims`` lists the local dimensions of the subsystems, in order; their
    product must equal the matrix size. Construction fails on matrices that
    are not Hermitian, not unit trace, or not positive semidefinite.
    """

    matrix: np.ndarray
    dims: tuple = ()
    eigenvalues: Optional[np.ndarray] = field(default=None, repr=False, init=False)

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        dims = tuple(int(x) for x in self.dims) if self.dims else (rho.shape[0],)
        if int(np.prod(dims)) != rho.shape[0]:
            raise ValueError(f"subsystem dims {dims} do not match matrix size {rho.shape[0]}")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        rho = 0.5 * (rho + rho.conj().T)
        evals = np.linalg.eigvalsh(rho)
        if evals[0] < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {evals[0]!r}")
        evals = np.clip(evals, 0.0, None)[::-1]
        rho.flags.writeable = False
        object.__setattr__(self, "matrix", rho)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "eigenvalues", evals)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def partial_trace(self, keep: Sequence[int]) -> "DensityMatrix":
        """Reduce to the subsystems listed in ``keep`` (indices into ``dims``)."""
        keep = sorted(set(keep))
        n = len(self.dims)
        if not keep or keep[0] < 0 or keep[-1] >= n:
            raise ValueError(f"invalid subsystem selection {keep} for {n} subsystems")
        drop = [k for k in range(n) if k not in keep]
        t = self.matrix.reshape(self.dims + self.dims)
        # bra axes are offset by n; trace dropped ones pairwise
        ket_axes = keep + drop
        t = t.transpose(ket_axes + [n + k for k in ket_axes])
        dk = int(np.prod([self.dims[k] for k in keep]))
        dd = int(np.prod([self.dims[k] for k in drop])) if drop else 1
        t = t.reshape(dk, dd, dk, dd)
        reduced = np.einsum("aibi->ab", t)
        return DensityMatrix(reduced, tuple(self.dims[k] for k in keep))


def site_subset(sites: Sequence[int], L: int) -> tuple[int, ...]:
    """Validate a subset of site indices and return it sorted.

    Duplicates and out-of-range indices are errors rather than being
    silently repaired.
    """
    sites = [int(s) for s in sites]
    if not sites:
        raise ValueError("site subset must be nonempty")
    if len(set(sites)) != len(sites):
        raise ValueError(f"site subset {sites} has duplicates")
    if min(sites) < 0 or max(sites) >= L:
        raise ValueError(f"site subset {sites} out of range for L={L}")
    return tuple(sorted(sites))


# -- generators ---------------------------------------------------------------


def make_product_state(L: int, d: int, local_vectors) -> DenseState:
    """Tensor product of one local vector per site.

    A single vector is broadcast to every site.
    """
    vecs = [np.asarray(v, dtype=complex).reshape(-1) for v in local_vectors]
    if len(vecs) == 1:
        vecs = vecs * L
    if len(vecs) != L:
        raise ValueError(f"need {L} local vectors, got {len(vecs)}")
    check_budget(d**L)
    out = np.ones(1, dtype=complex)
    for k, v in enumerate(vecs):
        if v.size != d:
            raise ValueError(f"local vector {k} has length {v.size}, expected {d}")
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError(f"local vector {k} is zero")
        out = np.kron(out, v / norm)
    return DenseState(L, d, out, "product")


def basis_state(L: int, d: int, digits: Sequence[int]) -> DenseState:
    vecs = []
    for s in digits:
        v = np.zeros(d)
        v[s] = 1.0
        vecs.append(v)
    return make_product_state(L, d, vecs)


def make_ghz(L: int, d: int = 2) -> DenseState:
    """``(|0...0> + |1...1>)/sqrt(2)``."""
    if L < 2:
        raise ValueError(f"GHZ state needs L >= 2, got {L}")
    check_budget(d**L)
    amps = np.zeros(d**L, dtype=complex)
    amps[0] = 1.0
    amps[sum(d**k for k in range(L))] = 1.0
    return DenseState.from_vector(L, d, amps, "ghz")


def make_w(L: int) -> DenseState:
    """Equal superposition of all single-excitation qubit basis states."""
    if L < 2:
        raise ValueError(f"W state needs L >= 2, got {L}")
    check_budget(2**L)
    amps = np.zeros(2**L, dtype=complex)
    for k in range(L):
        amps[2 ** (L - 1 - k)] = 1.0
    return DenseState.from_vector(L, 2, amps, "w")


def make_slater(L: int, N: int, coeffs) -> DenseState:
    """Second-quantized Slater determinant of ``N`` fermions in ``L`` orbitals.

    ``coeffs`` is an ``L x N`` matrix whose orthonormal columns are the
    occupied single-particle orbitals. The amplitude of an occupation pattern
    is the determinant of the rows of ``coeffs`` picked out by the occupied
    sites, in increasing site order.
    """
    C = np.asarray(coeffs, dtype=complex)
    if C.ndim == 1:
        C = C.reshape(-1, 1)
    if N > L:
        raise ValueError(f"cannot place N={N} particles in L={L} orbitals")
    if C.shape != (L, N):
        raise ValueError(f"coefficient matrix has shape {C.shape}, expected ({L}, {N})")
    gram = C.conj().T @ C
    if np.max(np.abs(gram - np.eye(N)), initial=0.0) > 1e-10:
        raise ValueError("coefficient columns are not orthonormal")
    check_budget(2**L)
    amps = np.zeros(2**L, dtype=complex)
    for occupied in itertools.combinations(range(L), N):
        index = sum(2 ** (L - 1 - k) for k in occupied)
        amps[index] = np.linalg.det(C[list(occupied), :]) if N else 1.0
    return DenseState.from_vector(L, 2, amps, "slater")


def random_orthonormal(L: int, N: int, seed, complex_valued: bool = False) -> np.ndarray:
    """``L x N`` matrix with orthonormal columns from a QR of a Gaussian draw."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((L, N))
    if complex_valued:
        A = A + 1j * rng.standard_normal((L, N))
    Q, R = np.linalg.qr(A)
    # fix the QR sign freedom so the draw is a deterministic function of the seed
    return Q * np.sign(np.diag(R).real)


def make_random_mps(L: int, d: int, chi: int, seed) -> DenseState:
    """Contract a chain of Gaussian random cores and normalize.

    Bond ``k`` is capped at ``min(chi, d**k, d**(L-k))``, so the Schmidt rank
    at every cut is bounded by the same number.
    """
    if chi < 1:
        raise ValueError(f"bond dimension must be >= 1, got {chi}")
    check_budget(d**L)
    rng = np.random.default_rng(seed)
    bonds = [min(chi, d**k, d ** (L - k)) for k in range(L + 1)]
    cores = []
    for k in range(L):
        shape = (bonds[k], d, bonds[k + 1])
        cores.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    vec = MatrixProductState(L, d, tuple(cores)).to_vector()
    return DenseState.from_vector(L, d, vec, "random-mps")


def random_state(L: int, d: int, seed) -> DenseState:
    """Haar-random pure state."""
    check_budget(d**L)
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(d**L) + 1j * rng.standard_normal(d**L)
    return DenseState.from_vector(L, d, vec, "random")


# -- Schmidt decomposition, partial traces ------------------------------------


def _check_cut(state: DenseState, j: int) -> None:
    if not 1 <= j <= state.L - 1:
        raise ValueError(f"cut j={j} out of range 1..{state.L - 1}")


def schmidt(state: DenseState, j: int) -> SchmidtSpectrum:
    """Schmidt values across the cut after the first ``j`` sites."""
    _check_cut(state, j)
    mat = state.amplitudes.reshape(state.d**j, state.d ** (state.L - j))
    values = np.linalg.svd(mat, compute_uv=False)
    return SchmidtSpectrum(np.sort(values)[::-1], j)


def reduced_density(state: DenseState, sites: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on an arbitrary (possibly non-contiguous) subset.

    The kept sites appear in increasing order in the returned operator.
    """
    sites = site_subset(sites, state.L)
    k = len(sites)
    check_budget(state.d**k, "reduced density matrix")
    rest = [s for s in range(state.L) if s not in sites]
    psi = state.tensor.transpose(list(sites) + rest).reshape(state.d**k, -1)
    rho = psi @ psi.conj().T
    return DensityMatrix(rho, (state.d,) * k)


# -- MPS conversion and truncation --------------------------------------------


def to_mps(state: DenseState, chi_max: Optional[int] = None):
    """Left-to-right sequential SVD.

    Returns ``(mps, errors)`` where ``errors[j-1]`` is the squared weight
    discarded at cut ``j``, measured on the (already truncated) tensor that
    enters that step. Truncated states are not renormalized.
    """
    if chi_max is not None and chi_max < 1:
        raise ValueError(f"chi_max must be >= 1, got {chi_max}")
    L, d = state.L, state.d
    check_budget(d**L)
    cores = []
    errors = np.zeros(L - 1)
    rest = state.amplitudes.reshape(1, -1)
    left = 1
    for j in range(1, L):
        mat = rest.reshape(left * d, -1)
        U, s, Vh = np.linalg.svd(mat, full_matrices=False)
        keep = s.size if chi_max is None else min(chi_max, s.size)
        errors[j - 1] = float(np.sum(s[keep:] ** 2))
        cores.append(U[:, :keep].reshape(left, d, keep))
        rest = s[:keep, None] * Vh[:keep]
        left = keep
    cores.append(rest.reshape(left, d, 1))
    return MatrixProductState(L, d, tuple(cores)), errors


@dataclass(frozen=True)
class TruncationProfile:
    """Per-cut truncation errors at a fixed bond dimension.

    ``cut_errors`` are the idealized tail weights of the original state's
    Schmidt spectra; ``sweep_errors`` are what a single left-to-right SVD
    sweep actually discards; ``realized`` is the squared distance between the
    state and its truncated MPS.
    """

    chi: int
    cut_errors: np.ndarray
    total: float
    realized: float
    sweep_errors: np.ndarray


def tail_weight(values: np.ndarray, chi: int) -> float:
    return float(np.sum(np.asarray(values)[chi:] ** 2))


def truncation_profile(state: DenseState, chi: int) -> TruncationProfile:
    if chi < 1:
        raise ValueError(f"bond dimension must be >= 1, got {chi}")
    cut_errors = np.array([tail_weight(schmidt(state, j).values, chi) for j in range(1, state.L)])
    total = float(cut_errors.sum())
    mps, sweep = to_mps(state, chi)
    diff = state.amplitudes - mps.to_vector()
    realized = float(np.vdot(diff, diff).real)
    if realized > total + 1e-9:
        raise AssertionError(
            f"realized truncation error {realized!r} exceeds the per-cut sum {total!r}"
        )
    return TruncationProfile(chi, cut_errors, total, realized, sweep)


def permutation_parity(seq: Sequence[int]) -> int:
    """+1 for an even number of inversions, -1 for odd."""
    inversions = 0
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def check_permutation(perm, L: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.intp).reshape(-1)
    if perm.size != L or sorted(perm.tolist()) != list(range(L)):
        raise ValueError(f"{perm.tolist()} is not a permutation of 0..{L - 1}")
    return perm


def permute_sites(state: DenseState, perm, fermionic: bool = False) -> DenseState:
    """Reorder the chain so that position ``p`` holds original site ``perm[p]``.

    With ``fermionic=True`` (qubits only) each occupation-basis amplitude is
    multiplied by the sign of the permutation that restores increasing
    orbital order among the occupied sites, i.e. the Jordan-Wigner sign of
    reordering the creation operators. Applied to a Slater determinant this
    agrees with permuting the rows of its coefficient matrix.
    """
    perm = check_permutation(perm, state.L)
    if fermionic and state.d != 2:
        raise ValueError("fermionic reordering is defined only for d=2 occupation bases")
    new = state.tensor.transpose(perm).reshape(-1).copy()
    if fermionic:
        L = state.L
        for index in np.flatnonzero(new):
            occupied = [p for p in range(L) if (index >> (L - 1 - p)) & 1]
            if permutation_parity(perm[occupied]) < 0:
                new[index] = -new[index]
    kind = state.kind if fermionic or state.kind != "slater" else "generic"
    return DenseState(state.L, state.d, new, kind)

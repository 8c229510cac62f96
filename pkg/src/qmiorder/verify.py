"""Brute-force checks of the entropy inequalities behind the ordering costs.

Every check returns a :class:`CheckResult` whose ``worst_margin`` is the
smallest ``RHS - LHS`` seen over its instances, so a check passes when the
margin stays above ``-tolerance``. Suites combine checks over batches of
random instances and over the built-in state battery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.stats

from . import cost as costs
from .cost import CostInputs
from .entropy import (
    entropy,
    entropy_of_density,
    qmi_matrix,
    simbound,
    single_site_entropies,
    site_entropy,
    truncation_norm,
)
from .models import HamiltonianSpec, make_ground_state
from .optimize import Objective, make_evaluator
from .states import (
    DenseState,
    DensityMatrix,
    check_budget,
    make_ghz,
    make_product_state,
    make_random_mps,
    make_slater,
    make_w,
    permute_sites,
    random_orthonormal,
    schmidt,
    site_subset,
    tail_weight,
    to_mps,
)

TOL = 1e-9
SLATER_REL_TOL = 1e-8
SLATER_ZERO = 1e-10
RANK_SV_CUTOFF = 1e-12
MAX_WITNESSES = 5


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_margin: float
    instances: int
    tolerance: float = TOL
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.instances} instances, worst margin {self.worst_margin:.3e}"


class _Tally:
    """Running minimum of margins plus a few failing witnesses."""

    def __init__(self, name: str, tolerance: float = TOL):
        self.name = name
        self.tolerance = tolerance
        self.worst = math.inf
        self.instances = 0
        self.witnesses = []
        self.details = {}

    def add(self, margin: float, witness=None) -> None:
        self.instances += 1
        self.worst = min(self.worst, float(margin))
        if margin < -self.tolerance and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"margin": float(margin), "input": witness})

    def absorb(self, result: CheckResult) -> None:
        self.instances += result.instances
        self.worst = min(self.worst, result.worst_margin)
        for w in result.witnesses:
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(w)

    def result(self) -> CheckResult:
        worst = self.worst if self.instances else 0.0
        return CheckResult(
            self.name,
            bool(worst >= -self.tolerance),
            worst,
            self.instances,
            self.tolerance,
            self.witnesses,
            self.details,
        )


def _state_witness(state: DenseState) -> dict:
    amps = state.amplitudes
    return {
        "L": state.L,
        "d": state.d,
        "kind": state.kind,
        "amplitudes": [[float(a.real), float(a.imag)] for a in amps],
    }


# -- random densities and density-level inequalities --------------------------


def random_density(dims: Sequence[int], seed, ancilla_dim: Optional[int] = None) -> DensityMatrix:
    """Partial trace of a Haar-random pure state on system x ancilla.

    The ancilla defaults to the full system dimension, which makes the
    result full rank almost surely.
    """
    dims = tuple(int(x) for x in dims)
    n = int(np.prod(dims))
    m = n if ancilla_dim is None else int(ancilla_dim)
    check_budget(n * m, "purified density")
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    psi /= np.linalg.norm(psi)
    return DensityMatrix(psi @ psi.conj().T, dims)


def _S(rho: DensityMatrix, keep, alpha: float = 1.0) -> float:
    return entropy_of_density(rho.partial_trace(keep), alpha)


def check_sa(rho: DensityMatrix) -> CheckResult:
    """``S(A) + S(B) - S(AB)`` on a bipartite density."""
    if len(rho.dims) != 2:
        raise ValueError(f"subadditivity check needs two subsystems, got dims {rho.dims}")
    tally = _Tally("sa")
    tally.add(_S(rho, [0]) + _S(rho, [1]) - entropy_of_density(rho), rho.dims)
    return tally.result()


def check_ssa(rho: DensityMatrix) -> CheckResult:
    """``S(AB) + S(BC) - S(B) - S(ABC)`` on a tripartite density."""
    if len(rho.dims) != 3:
        raise ValueError(f"strong subadditivity check needs three subsystems, got dims {rho.dims}")
    tally = _Tally("ssa")
    margin = _S(rho, [0, 1]) + _S(rho, [1, 2]) - _S(rho, [1]) - entropy_of_density(rho)
    tally.add(margin, rho.dims)
    return tally.result()


def check_wsa(rho: DensityMatrix, alpha: float) -> CheckResult:
    """Both sides of the weak subadditivity sandwich for a Renyi entropy."""
    if len(rho.dims) != 2:
        raise ValueError(f"weak subadditivity check needs two subsystems, got dims {rho.dims}")
    sa = _S(rho, [0], alpha)
    hb = _S(rho, [1], 0.0)
    sab = entropy_of_density(rho, alpha)
    tally = _Tally(f"wsa(alpha={alpha:g})")
    tally.add(sa + hb - sab, rho.dims)
    tally.add(sab - (sa - hb), rho.dims)
    return tally.result()


# -- spectra ------------------------------------------------------------------


def random_spectrum(rng: np.random.Generator, max_len: int = 64) -> np.ndarray:
    """Sorted probability vector from a mix of flat, skewed and sparse draws."""
    n = int(rng.integers(1, max_len + 1))
    style = rng.integers(3)
    if style == 0:
        p = rng.random(n)
    elif style == 1:
        p = rng.random(n) ** rng.uniform(1.0, 20.0)
    else:
        p = rng.dirichlet(np.full(n, rng.uniform(0.05, 3.0)))
    p = p / p.sum()
    return np.sort(p)[::-1]


def check_simbound(probabilities, chi: int) -> CheckResult:
    """Upper bound at alpha=1/2 and lower bound at alpha=2 around ``eps_j(chi)``."""
    eps = truncation_norm(probabilities, chi)
    tally = _Tally(f"simbound(chi={chi})")
    witness = {"chi": chi, "spectrum": list(map(float, probabilities))}
    tally.add(simbound(chi, 0.5, entropy(probabilities, 0.5)) - eps, witness)
    tally.add(eps - simbound(chi, 2.0, entropy(probabilities, 2.0)), witness)
    return tally.result()


RENYI_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)


def check_renyi_monotonicity(probabilities, alphas: Sequence[float] = RENYI_GRID) -> CheckResult:
    values = [entropy(probabilities, a) for a in alphas]
    tally = _Tally("renyi-monotonicity")
    for a in range(len(alphas)):
        for b in range(a + 1, len(alphas)):
            tally.add(values[a] - values[b], {"alphas": [alphas[a], alphas[b]]})
    return tally.result()


# -- state-level checks ---------------------------------------------------------


class _EntropyCache:
    def __init__(self, state: DenseState):
        self.state = state
        self._cache = {}

    def __call__(self, sites: Iterable[int]) -> float:
        key = tuple(sorted(sites))
        if key not in self._cache:
            self._cache[key] = site_entropy(self.state, key)
        return self._cache[key]


def check_main_bound(state: DenseState, replay_chain: Optional[bool] = None) -> CheckResult:
    """Block entropy against the single-distance QMI bound for every ``(j, delta)``.

    With ``replay_chain`` (default for ``L <= 8``) each step of the proof is
    re-checked on actual reduced states: the strong-subadditivity steps that
    grow a comb ``{r, r+delta, r+2*delta, ...}`` one site at a time, and the
    subadditivity steps that glue the ``delta`` combs into the block.
    """
    L = state.L
    if replay_chain is None:
        replay_chain = L <= 8
    S = _EntropyCache(state)
    inputs = CostInputs(single_site_entropies(state), qmi_matrix(state))
    tally = _Tally("main-bound")
    chain = _Tally("main-bound-chain")
    tight = {}
    for j in range(2, L):
        block = S(range(j))
        for delta in range(1, j // 2 + 1):
            margin = costs.main_bound(inputs, j, delta) - block
            tally.add(margin, {"j": j, "delta": delta, "state": _state_witness(state)})
            tight[f"{j},{delta}"] = margin
            if not replay_chain:
                continue
            combs = []
            for r in range(delta):
                comb = [r]
                k = r
                while k + delta < j:
                    # SSA with A = comb minus k, B = {k}, C = {k + delta}
                    step = S(comb) + S([k, k + delta]) - S([k]) - S(comb + [k + delta])
                    chain.add(step, {"j": j, "delta": delta, "comb": comb, "k": k})
                    comb = comb + [k + delta]
                    k += delta
                combs.append(comb)
            union = combs[0]
            for comb in combs[1:]:
                chain.add(S(union) + S(comb) - S(union + comb), {"j": j, "delta": delta})
                union = union + comb
    result = tally.result()
    if replay_chain:
        chain_result = chain.result()
        result.details["chain"] = {
            "steps": chain_result.instances,
            "worst_margin": chain_result.worst_margin,
        }
        result.passed = result.passed and chain_result.passed
        result.worst_margin = min(result.worst_margin, chain_result.worst_margin)
        result.witnesses += chain_result.witnesses[: MAX_WITNESSES - len(result.witnesses)]
    result.details["margins"] = tight
    return result


def check_weighted_bound(state: DenseState) -> CheckResult:
    """Block entropy against the weighted-average estimate at every cut."""
    inputs = CostInputs(single_site_entropies(state), qmi_matrix(state))
    hats = costs.i_hat(inputs)
    tally = _Tally("weighted-bound")
    for j in range(1, state.L):
        tally.add(hats[j - 1] - site_entropy(state, range(j)), {"j": j, "kind": state.kind})
    return tally.result()


def check_lse_sandwich(state: DenseState) -> CheckResult:
    """``max_j I_j < I_MPS <= max_j I_j + log2(L-1)``; strict on the left when ``L >= 3``."""
    inputs = CostInputs(single_site_entropies(state), qmi_matrix(state))
    top = costs.i_mps_check(inputs)
    lse = costs.i_mps(inputs)
    tally = _Tally("lse-sandwich")
    tally.add(top + math.log2(state.L - 1) - lse, {"kind": state.kind})
    if state.L >= 3 and not lse > top:
        tally.add(-1.0, {"kind": state.kind, "strict": "max not strictly below LogSumExp"})
    return tally.result()


def check_qmi_gap(state: DenseState) -> CheckResult:
    """How much more site ``k`` shares with the block before it than with its neighbour.

    For block length ``k = 1 .. L-2`` the gap
    ``I(sites < k : site k) - I(site k-1 : site k)`` must not exceed twice the
    entropy of site ``k`` nor ``2 log2 d``.
    """
    S = _EntropyCache(state)
    tally = _Tally("qmi-gap")
    cap = 2.0 * math.log2(state.d)
    gaps = []
    for k in range(1, state.L - 1):
        block = list(range(k))
        gap = (S(block) + S([k]) - S(block + [k])) - (S([k - 1]) + S([k]) - S([k - 1, k]))
        gaps.append(gap)
        tally.add(2.0 * S([k]) - gap, {"k": k, "kind": state.kind})
        tally.add(cap - gap, {"k": k, "kind": state.kind, "bound": "2 log2 d"})
    result = tally.result()
    result.details["gaps"] = gaps
    return result


def _pairing_deviation(values: np.ndarray, offset: int) -> float:
    """Relative spread of ``sigma_k * sigma_{M + offset - k}`` (1-based ``k``)."""
    M = values.size
    products = [values[k - 1] * values[M + offset - k - 1] for k in range(1, M + offset) if 1 <= M + offset - k <= M]
    products = np.array(products)
    if products.size == 0:
        return math.inf
    mean = products.mean()
    return float(np.max(np.abs(products - mean)) / mean)


def check_slater_symmetry(state: DenseState, j: int, allow_generic: bool = False) -> CheckResult:
    """Pairing symmetry of the nonzero Schmidt values at cut ``j``.

    Both index conventions are tried: ``k <-> M-k`` and ``k <-> M+1-k``, where
    ``M`` counts the Schmidt values above ``1e-10``. The check passes when
    some pairing gives products equal to within ``1e-8`` relative spread.
    Only states made by :func:`make_slater` are accepted unless
    ``allow_generic`` is set (for negative controls).
    """
    if state.kind != "slater" and not allow_generic:
        raise ValueError("pairing symmetry is only guaranteed for Slater determinant states")
    values = schmidt(state, j).values
    values = values[values > SLATER_ZERO]
    M = values.size
    deviations = {"k<->M-k": _pairing_deviation(values, 0), "k<->M+1-k": _pairing_deviation(values, 1)}
    holding = [name for name, dev in deviations.items() if dev <= SLATER_REL_TOL]
    best = min(deviations.values())
    tally = _Tally(f"slater-symmetry(j={j})", tolerance=0.0)
    tally.add(SLATER_REL_TOL - best, {"j": j, "M": M})
    result = tally.result()
    p_j = None
    if holding:
        offset = 1 if holding[-1] == "k<->M+1-k" else 0
        p_j = float(values[0] * values[M + offset - 2]) if M + offset >= 2 else None
    result.details = {
        "M": M,
        "deviations": deviations,
        "pairings_holding": holding,
        "p_j": p_j,
    }
    return result


def schmidt_rank(state: DenseState, sites: Sequence[int]) -> int:
    sites = site_subset(sites, state.L)
    if len(sites) == state.L:
        return 1
    rest = [s for s in range(state.L) if s not in sites]
    mat = state.tensor.transpose(list(sites) + rest).reshape(state.d ** len(sites), -1)
    values = np.linalg.svd(mat, compute_uv=False)
    return int(np.count_nonzero(values > RANK_SV_CUTOFF))


def check_rank_sa(state: DenseState, A: Sequence[int], B: Sequence[int]) -> CheckResult:
    """Exact-rank inequality ``rank(AB) <= rank(A) rank(B)``, reported in bits."""
    A = site_subset(A, state.L)
    B = site_subset(B, state.L)
    if set(A) & set(B):
        raise ValueError(f"subsets {A} and {B} overlap")
    ra, rb, rab = schmidt_rank(state, A), schmidt_rank(state, B), schmidt_rank(state, A + B)
    tally = _Tally("rank-sa", tolerance=0.0)
    # integer comparison first so float log noise cannot flip the verdict
    margin = 0.0 if rab == ra * rb else math.log2(ra) + math.log2(rb) - math.log2(rab)
    tally.add(margin, {"A": list(A), "B": list(B), "ranks": [ra, rb, rab]})
    return tally.result()


def check_truncation(state: DenseState, chi: int) -> CheckResult:
    """Realized sweep error against the per-cut tail sum."""
    cut_errors = [tail_weight(schmidt(state, j).values, chi) for j in range(1, state.L)]
    mps, _ = to_mps(state, chi)
    diff = state.amplitudes - mps.to_vector()
    realized = float(np.vdot(diff, diff).real)
    tally = _Tally(f"truncation(chi={chi})")
    tally.add(sum(cut_errors) - realized, {"kind": state.kind, "L": state.L})
    result = tally.result()
    result.details = {"realized": realized, "bound": float(sum(cut_errors))}
    return result


# -- ordering efficacy (diagnostic) ---------------------------------------------


def _canonical_perms(L: int):
    for perm in itertools.permutations(range(L)):
        if perm[0] < perm[-1]:
            yield perm


def check_ordering_efficacy(
    state: DenseState,
    chi: int,
    objectives: Sequence[Objective],
    fermionic: bool = False,
) -> dict:
    """Compare ordering costs with the true truncation error over all orderings.

    For every canonical ordering the state is physically permuted and its
    total tail weight ``sum_j eps_j(chi)**2`` computed; each objective is
    evaluated on the relabeled QMI matrix of the unpermuted state. Returns
    Spearman rank correlations and the regret of each objective's argmin.
    Nothing here is asserted.
    """
    if state.L > 8:
        raise ValueError("efficacy enumeration is limited to L <= 8")
    inputs = CostInputs(single_site_entropies(state), qmi_matrix(state))
    evaluators = [make_evaluator(inputs, obj) for obj in objectives]
    perms = list(_canonical_perms(state.L))
    errors = np.empty(len(perms))
    values = np.empty((len(objectives), len(perms)))
    for n, perm in enumerate(perms):
        moved = permute_sites(state, perm, fermionic=fermionic)
        errors[n] = sum(tail_weight(schmidt(moved, j).values, chi) for j in range(1, state.L))
        arr = np.asarray(perm, dtype=np.intp)
        for m, evaluate in enumerate(evaluators):
            values[m, n] = evaluate(arr)
    best_error = float(errors.min())
    rows = []
    for m, obj in enumerate(objectives):
        v = values[m]
        degenerate = bool(np.ptp(v) <= 1e-12 or np.ptp(errors) <= 1e-12)
        rho = None if degenerate else float(scipy.stats.spearmanr(v, errors).statistic)
        arg = int(np.flatnonzero(v <= v.min() + 1e-12)[0])
        rows.append(
            {
                "objective": obj.label(),
                "spearman": rho,
                "degenerate": degenerate,
                "argmin": list(perms[arg]),
                "error_at_argmin": float(errors[arg]),
                "regret": float(errors[arg] - best_error),
            }
        )
    return {
        "chi": chi,
        "L": state.L,
        "orderings": len(perms),
        "min_error": best_error,
        "max_error": float(errors.max()),
        "objectives": rows,
    }


# -- battery and suites -----------------------------------------------------------


def battery(seed: int = 0, n_random: int = 200, max_L: int = 8) -> list[tuple[str, DenseState]]:
    """Named test states: product, GHZ, W, Slater, random MPS, ground states."""
    rng = np.random.default_rng(seed)
    states = []
    for L in range(3, max_L + 1, 2):
        vecs = rng.standard_normal((L, 2)) + 1j * rng.standard_normal((L, 2))
        states.append((f"product-L{L}", make_product_state(L, 2, vecs)))
    for L in range(3, max_L + 1):
        states.append((f"ghz-L{L}", make_ghz(L)))
        states.append((f"w-L{L}", make_w(L)))
    for L in range(4, max_L + 1):
        for N in range(1, min(4, L - 1) + 1):
            C = random_orthonormal(L, N, seed=(seed, L, N), complex_valued=bool(N % 2))
            states.append((f"slater-L{L}-N{N}", make_slater(L, N, C)))
    for n in range(n_random):
        L = int(rng.integers(3, max_L + 1))
        chi = int(rng.integers(1, 5))
        states.append((f"random-mps-{n}-L{L}-chi{chi}", make_random_mps(L, 2, chi, (seed, n))))
    for L in range(4, max_L + 1, 2):
        for g in (0.5, 1.0, 2.0):
            states.append((f"tfim-L{L}-g{g:g}", make_ground_state(HamiltonianSpec("tfim", L, g=g))))
        states.append((f"heisenberg-L{L}", make_ground_state(HamiltonianSpec("heisenberg", L))))
        states.append((f"xxz-L{L}", make_ground_state(HamiltonianSpec("xxz", L, delta=0.5))))
    return states


SUITES = (
    "main-bound",
    "weighted-bound",
    "lse",
    "qmi-gap",
    "truncation",
    "simbound",
    "renyi",
    "sa",
    "ssa",
    "wsa",
    "slater",
    "rank-sa",
    "efficacy",
)
REPORT_ONLY = ("efficacy",)


def _battery_suite(name, states, check) -> CheckResult:
    tally = _Tally(name)
    for label, state in states:
        result = check(state)
        if not result.passed and result.witnesses:
            result.witnesses = [dict(w, state=label) for w in result.witnesses]
        tally.absorb(result)
    return tally.result()


def run_suite(
    name: str,
    trials: int = 1000,
    seed: int = 0,
    states: Optional[list] = None,
    efficacy_L: int = 6,
    efficacy_chi: int = 2,
):
    """Run one named suite; returns a :class:`CheckResult` or, for efficacy, a dict."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if states is None and name in ("main-bound", "weighted-bound", "lse", "qmi-gap", "truncation", "rank-sa"):
        states = battery(seed)
    rng = np.random.default_rng(seed)

    if name == "main-bound":
        return _battery_suite(name, states, check_main_bound)
    if name == "weighted-bound":
        return _battery_suite(name, states, check_weighted_bound)
    if name == "lse":
        return _battery_suite(name, states, check_lse_sandwich)
    if name == "qmi-gap":
        return _battery_suite(name, states, check_qmi_gap)
    if name == "truncation":
        return _battery_suite(
            name, states, lambda s: _merge("truncation", [check_truncation(s, c) for c in (1, 2, 4)])
        )
    if name == "simbound":
        tally = _Tally(name)
        for _ in range(trials):
            p = random_spectrum(rng)
            for chi in (1, 2, 4):
                tally.absorb(check_simbound(p, chi))
        return tally.result()
    if name == "renyi":
        tally = _Tally(name)
        for _ in range(trials):
            tally.absorb(check_renyi_monotonicity(random_spectrum(rng)))
        return tally.result()
    if name == "sa":
        tally = _Tally(name)
        for t in range(trials):
            tally.absorb(check_sa(random_density((2, 2), (seed, t))))
        return tally.result()
    if name == "ssa":
        tally = _Tally(name)
        for t in range(trials):
            tally.absorb(check_ssa(random_density((2, 2, 2), (seed, t))))
        return tally.result()
    if name == "wsa":
        tally = _Tally(name)
        for t in range(trials):
            rho = random_density((2, 2), (seed, t))
            for alpha in (0.5, 2.0):
                tally.absorb(check_wsa(rho, alpha))
        return tally.result()
    if name == "slater":
        return slater_suite(n_states=50, seed=seed)
    if name == "rank-sa":
        return rank_sa_suite(states, seed=seed)
    return efficacy_suite(L=efficacy_L, chi=efficacy_chi, seed=seed)


def _merge(name: str, results: Sequence[CheckResult]) -> CheckResult:
    tally = _Tally(name, tolerance=min(r.tolerance for r in results))
    for r in results:
        tally.absorb(r)
    return tally.result()


def slater_suite(n_states: int = 50, seed: int = 0, n_controls: int = 20) -> CheckResult:
    """Pairing symmetry on random Slater states, plus a negative control.

    The control runs the same check on random MPS states at every cut; the
    suite fails if any control state satisfies the pairing at all of its
    cuts with more than two Schmidt values.
    """
    rng = np.random.default_rng(seed)
    tally = _Tally("slater", tolerance=0.0)
    pairings = {"k<->M-k": 0, "k<->M+1-k": 0}
    cuts = 0
    for n in range(n_states):
        L = int(rng.integers(4, 9))
        N = int(rng.integers(1, min(4, L - 1) + 1))
        C = random_orthonormal(L, N, seed=(seed, 1, n), complex_valued=bool(n % 2))
        state = make_slater(L, N, C)
        for j in range(1, L):
            result = check_slater_symmetry(state, j)
            tally.absorb(result)
            cuts += 1
            for name in result.details["pairings_holding"]:
                pairings[name] += 1
    controls_failing = 0
    for n in range(n_controls):
        L = int(rng.integers(5, 9))
        state = make_random_mps(L, 2, 4, (seed, 2, n))
        verdicts = [
            check_slater_symmetry(state, j, allow_generic=True)
            for j in range(1, L)
            if np.count_nonzero(schmidt(state, j).values > SLATER_ZERO) > 2
        ]
        if any(not v.passed for v in verdicts):
            controls_failing += 1
    result = tally.result()
    result.details = {
        "cuts": cuts,
        "pairing_counts": pairings,
        "controls": n_controls,
        "controls_failing": controls_failing,
    }
    if controls_failing != n_controls:
        result.passed = False
    return result


def rank_sa_suite(states, seed: int = 0, max_sites: int = 6, random_pairs: int = 10) -> CheckResult:
    """Rank inequality on contiguous neighbours and random disjoint subsets."""
    rng = np.random.default_rng(seed)
    tally = _Tally("rank-sa", tolerance=0.0)
    for label, state in states:
        L = state.L
        pairs = []
        for a in range(L):
            for b in range(a + 1, L):
                for c in range(b + 1, L + 1):
                    if c - a <= max_sites:
                        pairs.append((list(range(a, b)), list(range(b, c))))
        for _ in range(random_pairs):
            size = int(rng.integers(2, min(max_sites, L) + 1))
            chosen = rng.choice(L, size=size, replace=False).tolist()
            cut = int(rng.integers(1, size))
            pairs.append((chosen[:cut], chosen[cut:]))
        for A, B in pairs:
            result = check_rank_sa(state, A, B)
            if result.witnesses:
                result.witnesses = [dict(w, state=label) for w in result.witnesses]
            tally.absorb(result)
    return tally.result()


def efficacy_suite(L: int = 6, chi: int = 2, seed: int = 0, fields=(0.5, 1.0, 2.0)) -> dict:
    """Efficacy diagnostic on scrambled transverse-field Ising ground states."""
    rng = np.random.default_rng(seed)
    objectives = [Objective("i_mps"), Objective("idist", 2.0, +1), Objective("idist", -2.0, -1)]
    cases = []
    for g in fields:
        ground = make_ground_state(HamiltonianSpec("tfim", L, g=g))
        scramble = rng.permutation(L)
        state = permute_sites(ground, scramble)
        report = check_ordering_efficacy(state, chi, objectives)
        report["field"] = g
        report["scramble"] = scramble.tolist()
        cases.append(report)
    return {"name": "efficacy", "report_only": True, "seed": seed, "cases": cases}

"""Search over site orderings for a fixed QMI matrix.

An ordering is a permutation ``perm`` with ``perm[p]`` the original site put
at chain position ``p``. Costs are always computed from the relabeled QMI
matrix and entropies; the state itself is never touched here.

``idist`` and ``i_tree`` cannot tell a chain from its mirror image, so for
those objectives orderings are reported in canonical form (the
lexicographically smaller of ``perm`` and its reversal) and exhaustive search
enumerates only canonical orderings. ``i_mps`` and ``i_mps_check`` score prefix
blocks, which are not mirror symmetric, so they get neither treatment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .cost import CostInputs, cost_report, tree_blocks
from .states import check_permutation

TIE_TOL = 1e-12
EXHAUSTIVE_MAX_SITES = 9

OBJECTIVES = ("idist", "i_mps", "i_mps_check", "i_tree")


@dataclass(frozen=True)
class Objective:
    kind: str = "idist"
    eta: float = 2.0
    sign: int = +1

    def __post_init__(self):
        if self.kind not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.kind!r}; choose from {', '.join(OBJECTIVES)}")
        if self.sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def mirror_symmetric(self) -> bool:
        return self.kind in ("idist", "i_tree")

    def label(self) -> str:
        if self.kind == "idist":
            return f"idist({'+' if self.sign > 0 else '-'},eta={self.eta:g})"
        return self.kind


INVERSE_SQUARED_DISTANCE = Objective("idist", eta=-2.0, sign=-1)
SQUARED_DISTANCE = Objective("idist", eta=2.0, sign=+1)


def make_evaluator(inputs: CostInputs, objective: Objective) -> Callable[[np.ndarray], float]:
    """Return ``perm -> cost`` bound to contiguous copies of the inputs."""
    Q = np.ascontiguousarray(inputs.Q.entries, dtype=np.float64)
    S = np.ascontiguousarray(inputs.S, dtype=np.float64)
    if objective.kind == "idist":
        eta, sign = float(objective.eta), int(objective.sign)
        return lambda perm: kernels.idist_perm(Q, perm, eta, sign)
    if objective.kind == "i_mps":
        return lambda perm: kernels.i_mps_perm(Q, S, perm)
    if objective.kind == "i_mps_check":
        return lambda perm: kernels.i_mps_check_perm(Q, S, perm)
    tree_blocks(inputs.L)  # validates L
    return lambda perm: kernels.i_tree_perm(Q, S, perm)


def cost_of_ordering(inputs: CostInputs, perm, objective: Objective = SQUARED_DISTANCE) -> float:
    perm = np.ascontiguousarray(check_permutation(perm, inputs.L))
    return float(make_evaluator(inputs, objective)(perm))


def canonical(perm, objective: Objective) -> tuple:
    perm = tuple(int(p) for p in perm)
    if objective.mirror_symmetric:
        return min(perm, perm[::-1])
    return perm


@dataclass
class OrderingReport:
    method: str
    objective: dict
    best: list
    best_cost: float
    evaluations: int
    trajectory: list = field(default_factory=list)
    costs: dict = field(default_factory=dict)
    settings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def _report(method, inputs, objective, best, best_cost, evaluations, trajectory, settings):
    best = list(best)
    # the incumbent may have been found as the mirror of ``best``; re-score the reported one
    best_cost = make_evaluator(inputs, objective)(np.asarray(best, dtype=np.intp))
    full = cost_report(
        inputs.relabel(best),
        eta=objective.eta,
        sign=objective.sign,
        tree=_is_power_of_two(inputs.L),
    )
    return OrderingReport(
        method=method,
        objective=asdict(objective),
        best=best,
        best_cost=float(best_cost),
        evaluations=int(evaluations),
        trajectory=trajectory,
        costs=full.to_json(),
        settings=settings,
    )


def _is_power_of_two(L: int) -> bool:
    return L >= 4 and L & (L - 1) == 0


class _Incumbent:
    """Best-so-far tracker with tolerance ties broken lexicographically."""

    def __init__(self, objective: Objective):
        self.objective = objective
        self.key = None
        self.cost = math.inf

    def offer(self, perm, cost: float) -> bool:
        key = canonical(perm, self.objective)
        if cost < self.cost - TIE_TOL or (abs(cost - self.cost) <= TIE_TOL and key < self.key):
            self.key, self.cost = key, cost
            return True
        return False


def exhaustive(
    inputs: CostInputs,
    objective: Objective = SQUARED_DISTANCE,
    max_sites: int = EXHAUSTIVE_MAX_SITES,
) -> OrderingReport:
    """Global minimum by enumeration."""
    L = inputs.L
    if max_sites > EXHAUSTIVE_MAX_SITES:
        raise ValueError(f"exhaustive search is capped at L={EXHAUSTIVE_MAX_SITES}")
    if L > max_sites:
        raise ValueError(
            f"exhaustive search over {L} sites exceeds the cap of {max_sites}; "
            "use --method two-opt or --method anneal"
        )
    evaluate = make_evaluator(inputs, objective)
    best = _Incumbent(objective)
    count = 0
    buf = np.empty(L, dtype=np.intp)
    for perm in itertools.permutations(range(L)):
        if objective.mirror_symmetric and perm[0] > perm[-1]:
            continue
        buf[:] = perm
        count += 1
        best.offer(perm, evaluate(buf))
    return _report(
        "exhaustive", inputs, objective, best.key, best.cost, count, [], {"max_sites": max_sites}
    )


def _neighbours(perm: np.ndarray):
    """Every pairwise swap, then every reversal of a segment of length >= 3."""
    L = perm.size
    for i in range(L):
        for j in range(i + 1, L):
            cand = perm.copy()
            cand[i], cand[j] = perm[j], perm[i]
            yield cand
    for i in range(L):
        for j in range(i + 2, L):
            cand = perm.copy()
            cand[i : j + 1] = perm[i : j + 1][::-1]
            yield cand


def _random_perm(rng: np.random.Generator, L: int) -> np.ndarray:
    return rng.permutation(L).astype(np.intp)


def _descend(evaluate, start: np.ndarray, objective: Objective, max_steps: int):
    current = start.copy()
    cost = evaluate(current)
    evaluations = 1
    trajectory = [(0, cost)]
    for step in range(1, max_steps + 1):
        best_cand, best_cost, best_key = None, math.inf, None
        for cand in _neighbours(current):
            c = evaluate(cand)
            evaluations += 1
            key = tuple(cand.tolist())
            if c < best_cost - TIE_TOL or (abs(c - best_cost) <= TIE_TOL and key < best_key):
                best_cand, best_cost, best_key = cand, c, key
        if best_cand is None or not best_cost < cost - TIE_TOL:
            break
        current, cost = best_cand, best_cost
        trajectory.append((step, cost))
    return current, cost, evaluations, trajectory


def two_opt(
    inputs: CostInputs,
    objective: Objective = SQUARED_DISTANCE,
    start: Optional[Sequence[int]] = None,
    seed: int = 0,
    restarts: int = 1,
    max_steps: int = 10_000,
) -> OrderingReport:
    """Steepest descent over swaps and segment reversals.

    Restart ``r`` begins at ``start`` when ``r == 0`` and ``start`` is given,
    otherwise at a random ordering drawn with seed ``seed + r``. Each step
    moves to the best neighbour (lexicographically smallest on ties) and the
    search stops when no neighbour improves by more than ``1e-12``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    L = inputs.L
    evaluate = make_evaluator(inputs, objective)
    best = _Incumbent(objective)
    best_trajectory = []
    evaluations = 0
    for r in range(restarts):
        if r == 0 and start is not None:
            init = check_permutation(start, L).copy()
        else:
            init = _random_perm(np.random.default_rng(seed + r), L)
        perm, cost, n, traj = _descend(evaluate, init, objective, max_steps)
        evaluations += n
        if best.offer(perm, cost):
            best_trajectory = [[r, step, c] for step, c in traj]
    settings = {"seed": seed, "restarts": restarts, "start": None if start is None else list(start)}
    return _report(
        "two_opt", inputs, objective, best.key, best.cost, evaluations, best_trajectory, settings
    )


@dataclass(frozen=True)
class AnnealConfig:
    """Simulated-annealing schedule.

    ``initial_temperature=None`` picks the mean absolute cost change of 100
    random moves from the starting ordering. ``max_evaluations`` caps the
    total work per restart.
    """

    initial_temperature: Optional[float] = None
    cooling: float = 0.92
    n_temperatures: int = 80
    steps_per_temperature: Optional[int] = None
    restarts: int = 4
    seed: int = 0
    max_evaluations: Optional[int] = None
    record_trajectory: bool = False

    def __post_init__(self):
        if not 0.0 < self.cooling < 1.0:
            raise ValueError(f"cooling ratio must be in (0, 1), got {self.cooling}")
        if self.n_temperatures < 1:
            raise ValueError("n_temperatures must be >= 1")
        if self.steps_per_temperature is not None and self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise ValueError("initial temperature must be positive")


def _draw_moves(rng: np.random.Generator, L: int, n: int):
    """``n`` random moves as ``(i, j, is_swap, uniform)`` lists with ``i < j``."""
    a = rng.integers(0, L, n)
    b = rng.integers(0, L - 1, n)
    b = b + (b >= a)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return lo.tolist(), hi.tolist(), (rng.random(n) < 0.5).tolist(), rng.random(n).tolist()


def _apply_move(perm: np.ndarray, i: int, j: int, is_swap: bool) -> np.ndarray:
    cand = perm.copy()
    if is_swap:
        cand[i], cand[j] = perm[j], perm[i]
    else:
        cand[i : j + 1] = perm[i : j + 1][::-1]
    return cand


def _anneal_once(evaluate, start, objective, config: AnnealConfig, rng):
    L = start.size
    steps = config.steps_per_temperature or 10 * L
    budget = config.max_evaluations or math.inf
    current = start.copy()
    cost = evaluate(current)
    evaluations = 1
    best = _Incumbent(objective)
    best.offer(current, cost)

    temperature = config.initial_temperature
    if temperature is None:
        lo, hi, swap, _ = _draw_moves(rng, L, 100)
        deltas = [abs(evaluate(_apply_move(current, *m)) - cost) for m in zip(lo, hi, swap)]
        evaluations += 100
        temperature = float(np.mean(deltas)) or 1.0

    trajectory = []
    step = 0
    for _ in range(config.n_temperatures):
        for i, j, is_swap, u in zip(*_draw_moves(rng, L, steps)):
            if evaluations >= budget:
                break
            cand = _apply_move(current, i, j, is_swap)
            c = evaluate(cand)
            evaluations += 1
            step += 1
            delta = c - cost
            accepted = delta <= 0 or u < math.exp(-delta / temperature)
            if accepted:
                current, cost = cand, c
                if cost <= best.cost + TIE_TOL:
                    best.offer(current, cost)
            if config.record_trajectory:
                trajectory.append([step, temperature, cost, bool(accepted)])
        temperature *= config.cooling
    return best, evaluations, trajectory


def anneal(
    inputs: CostInputs,
    objective: Objective = SQUARED_DISTANCE,
    config: AnnealConfig = AnnealConfig(),
) -> OrderingReport:
    """Simulated annealing with swap and segment-reversal moves.

    Restart 0 starts from the identity ordering, restart ``r > 0`` from a
    random one; restart ``r`` draws all its randomness from seed
    ``config.seed + r``. The result is the best ordering seen over all
    restarts, independent of the order the restarts are run in.
    """
    L = inputs.L
    evaluate = make_evaluator(inputs, objective)
    best = _Incumbent(objective)
    best_trajectory = []
    evaluations = 0
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        start = np.arange(L, dtype=np.intp) if r == 0 else _random_perm(rng, L)
        run_best, n, traj = _anneal_once(evaluate, start, objective, config, rng)
        evaluations += n
        if best.offer(run_best.key, run_best.cost):
            best_trajectory = traj
    return _report(
        "anneal", inputs, objective, best.key, best.cost, evaluations, best_trajectory, asdict(config)
    )


def search(inputs: CostInputs, objective: Objective, method: str, **options) -> OrderingReport:
    if method == "exhaustive":
        return exhaustive(inputs, objective, **options)
    if method in ("two_opt", "two-opt"):
        return two_opt(inputs, objective, **options)
    if method == "anneal":
        return anneal(inputs, objective, AnnealConfig(**options))
    raise ValueError(f"unknown search method {method!r}")

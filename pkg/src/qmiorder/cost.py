"""Ordering cost functions built from single-site entropies and pairwise QMI.

Everything here is a function of ``S`` (single-site entropies) and ``Q`` (the
QMI matrix) only; positions along the chain are the array indices. Blocks are
given as block lengths ``j`` (the first ``j`` sites) or as half-open position
ranges ``[start, stop)``.

These are the reference implementations. The optimizer evaluates the same
quantities on relabeled inputs through :mod:`qmiorder.kernels`.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .entropy import QmiMatrix


@dataclass(frozen=True, eq=False)
class CostInputs:
    S: np.ndarray
    Q: QmiMatrix

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float).reshape(-1)
        if not isinstance(self.Q, QmiMatrix):
            object.__setattr__(self, "Q", QmiMatrix(self.Q))
        if S.size != self.Q.L:
            raise ValueError(f"{S.size} single-site entropies for a {self.Q.L}-site QMI matrix")
        if self.Q.alpha != 1:
            raise ValueError("cost functions need the von Neumann QMI (alpha=1)")
        object.__setattr__(self, "S", S)

    @property
    def L(self) -> int:
        return self.S.size

    def relabel(self, perm) -> "CostInputs":
        perm = np.asarray(perm, dtype=np.intp)
        return CostInputs(self.S[perm], self.Q.relabel(perm))


def idist(Q, eta: float = 2.0, sign: int = +1, ordered: bool = True) -> float:
    """Distance-weighted QMI, ``sign * sum_{i != j} I_ij |i-j|**eta``.

    The sum runs over ordered pairs, so each pair counts twice; pass
    ``ordered=False`` to count each unordered pair once.
    """
    Q = Q.entries if isinstance(Q, QmiMatrix) else np.asarray(Q, dtype=float)
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    total = 0.0
    L = Q.shape[0]
    for i in range(L):
        for j in range(i + 1, L):
            total += Q[i, j] * float(j - i) ** eta
    if ordered:
        total *= 2.0
    return sign * total


def weights(j: int) -> tuple[float, int]:
    """``(c_j, delta_max)`` with ``1/c_j = sum_{delta <= j//2} delta**-2``."""
    if j < 2:
        raise ValueError(f"weights need a block of at least 2 sites, got j={j}")
    delta_max = j // 2
    return 1.0 / sum(1.0 / d**2 for d in range(1, delta_max + 1)), delta_max


def _shifted_qmi_sum(Q: np.ndarray, start: int, stop: int, delta: int) -> float:
    return float(sum(Q[k, k + delta] for k in range(start, stop - delta)))


def main_bound(inputs: CostInputs, j: int, delta: int) -> float:
    """Upper bound on the entropy of the first ``j`` sites from QMI at distance ``delta``."""
    if not 2 <= j <= inputs.L - 1:
        raise ValueError(f"block length j={j} out of range 2..{inputs.L - 1}")
    if not 1 <= delta <= j // 2:
        raise ValueError(f"delta={delta} out of range 1..{j // 2} for j={j}")
    return float(inputs.S[:j].sum()) - _shifted_qmi_sum(inputs.Q.entries, 0, j, delta)


def i_block(inputs: CostInputs, start: int, stop: int) -> float:
    """Weighted-average entropy estimate of the contiguous block ``[start, stop)``."""
    if not 0 <= start < stop <= inputs.L or stop - start < 2:
        raise ValueError(f"block [{start}, {stop}) invalid for L={inputs.L}")
    c, delta_max = weights(stop - start)
    Q = inputs.Q.entries
    correction = sum(
        _shifted_qmi_sum(Q, start, stop, delta) / delta**2 for delta in range(1, delta_max + 1)
    )
    return float(inputs.S[start:stop].sum()) - c * correction


def i_hat_j(inputs: CostInputs, j: int) -> float:
    """Estimate of the entropy of the first ``j`` sites.

    At ``j=1`` there is no QMI correction and the estimate is ``S[0]``.
    """
    if not 1 <= j <= inputs.L - 1:
        raise ValueError(f"block length j={j} out of range 1..{inputs.L - 1}")
    if j == 1:
        return float(inputs.S[0])
    return i_block(inputs, 0, j)


def i_hat(inputs: CostInputs) -> np.ndarray:
    return np.array([i_hat_j(inputs, j) for j in range(1, inputs.L)])


def logsumexp2(values) -> float:
    """``log2 sum 2**v`` with the max factored out."""
    v = np.asarray(values, dtype=float)
    top = v.max()
    return float(top + np.log2(np.sum(np.exp2(v - top))))


def i_mps(inputs: CostInputs) -> float:
    return logsumexp2(i_hat(inputs))


def i_mps_check(inputs: CostInputs) -> float:
    return float(np.max(i_hat(inputs)))


def tree_blocks(L: int) -> list[tuple[int, int]]:
    """Blocks ``[start, stop)`` of a balanced binary tree, lowest layer first.

    Layer ``l = 1 .. M-1`` has ``2**(M-l)`` blocks of ``2**l`` sites; the root
    (the whole chain) is excluded.
    """
    M = int(round(math.log2(L))) if L > 0 else 0
    if L < 4 or 2**M != L:
        raise ValueError(f"L must be a power of two (at least 4) for the tree cost, got L={L}")
    return [
        (size * (i - 1), size * i)
        for l in range(1, M)
        for size in [2**l]
        for i in range(1, 2 ** (M - l) + 1)
    ]


def i_tree(inputs: CostInputs) -> float:
    return logsumexp2([i_block(inputs, a, b) for a, b in tree_blocks(inputs.L)])


@dataclass
class CostReport:
    idist_value: float
    eta: float
    sign: int
    i_hat: list
    i_mps: float
    i_mps_check: float
    main_bounds: dict = field(default_factory=dict)
    tree_value: Optional[float] = None
    idist_ordered: bool = True

    def to_json(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list:
        return [self.idist_value, self.eta, self.sign, self.i_mps, self.i_mps_check, self.tree_value]

    CSV_HEADER = ["idist", "eta", "sign", "i_mps_bits", "i_mps_check_bits", "i_tree_bits"]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def cost_report(
    inputs: CostInputs,
    eta: float = 2.0,
    sign: int = +1,
    tree: bool = False,
    ordered: bool = True,
) -> CostReport:
    """Evaluate every cost function on ``inputs``.

    ``main_bounds`` maps ``"j,delta"`` to the bound for each admissible pair.
    """
    hats = i_hat(inputs)
    bounds = {
        f"{j},{delta}": main_bound(inputs, j, delta)
        for j in range(2, inputs.L)
        for delta in range(1, j // 2 + 1)
    }
    report = CostReport(
        idist_value=idist(inputs.Q, eta, sign, ordered),
        eta=eta,
        sign=sign,
        i_hat=hats.tolist(),
        i_mps=logsumexp2(hats),
        i_mps_check=float(hats.max()),
        main_bounds=bounds,
        tree_value=i_tree(inputs) if tree else None,
        idist_ordered=ordered,
    )
    if not report.i_mps_check <= report.i_mps <= report.i_mps_check + math.log2(inputs.L - 1) + 1e-9:
        raise AssertionError("LogSumExp sandwich violated")
    return report

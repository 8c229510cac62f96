import itertools

import numpy as np
import pytest

from qmiorder.states import make_ghz, make_random_mps, make_w


def brute_partial_trace(state, keep):
    """Reduced density by explicit loops over basis labels; slow but obviously right."""
    L, d = state.L, state.d
    keep = list(keep)
    trace_out = [k for k in range(L) if k not in keep]
    dim = d ** len(keep)
    rho = np.zeros((dim, dim), dtype=complex)
    amps = state.amplitudes

    def index(labels):
        return sum(s * d ** (L - 1 - k) for k, s in enumerate(labels))

    for a in itertools.product(range(d), repeat=len(keep)):
        for b in itertools.product(range(d), repeat=len(keep)):
            total = 0.0
            for env in itertools.product(range(d), repeat=len(trace_out)):
                la = [0] * L
                lb = [0] * L
                for k, s in zip(keep, a):
                    la[k] = s
                for k, s in zip(keep, b):
                    lb[k] = s
                for k, s in zip(trace_out, env):
                    la[k] = lb[k] = s
                total += amps[index(la)] * np.conj(amps[index(lb)])
            ia = sum(s * d ** (len(keep) - 1 - n) for n, s in enumerate(a))
            ib = sum(s * d ** (len(keep) - 1 - n) for n, s in enumerate(b))
            rho[ia, ib] = total
    return rho


def shannon_bits(p):
    p = np.asarray([x for x in p if x > 1e-15])
    return float(-np.sum(p * np.log2(p)))


@pytest.fixture
def ghz4():
    return make_ghz(4)


@pytest.fixture
def w3():
    return make_w(3)


@pytest.fixture(params=range(5))
def random_mps_state(request):
    rng = np.random.default_rng(request.param)
    L = int(rng.integers(3, 7))
    return make_random_mps(L, 2, int(rng.integers(1, 4)), request.param)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.LINES):
        terminalreporter.write_line(line)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_partial_trace
from qmiorder.states import (
    BudgetError,
    DenseState,
    DensityMatrix,
    MatrixProductState,
    basis_state,
    make_ghz,
    make_product_state,
    make_random_mps,
    make_slater,
    make_w,
    permute_sites,
    random_orthonormal,
    random_state,
    reduced_density,
    schmidt,
    site_subset,
    tail_weight,
    to_mps,
    truncation_profile,
)


class TestGenerators:
    def test_product_zero_zero(self):
        s = make_product_state(2, 2, [[1, 0], [1, 0]])
        np.testing.assert_allclose(s.amplitudes, [1, 0, 0, 0])

    def test_product_plus(self):
        s = make_product_state(3, 2, [np.array([1, 1]) / np.sqrt(2)] * 3)
        np.testing.assert_allclose(s.amplitudes, np.full(8, 1 / np.sqrt(8)))

    def test_product_errors(self):
        with pytest.raises(ValueError):
            make_product_state(2, 2, [[1, 0, 0], [1, 0]])
        with pytest.raises(ValueError):
            make_product_state(2, 2, [[0, 0], [1, 0]])

    def test_ghz(self):
        np.testing.assert_allclose(make_ghz(2).amplitudes, [2**-0.5, 0, 0, 2**-0.5])
        with pytest.raises(ValueError):
            make_ghz(1)

    def test_w(self):
        np.testing.assert_allclose(make_w(2).amplitudes, [0, 2**-0.5, 2**-0.5, 0])
        amps = make_w(4).amplitudes
        assert np.count_nonzero(amps) == 4
        np.testing.assert_allclose(amps[[1, 2, 4, 8]], 0.5)
        with pytest.raises(ValueError):
            make_w(1)

    def test_slater_single_orbital(self):
        s = make_slater(2, 1, [[1.0], [0.0]])
        # |10>: site 0 occupied, index 2
        np.testing.assert_allclose(s.amplitudes, [0, 0, 1, 0])

    def test_slater_superposition(self):
        s = make_slater(2, 1, np.array([[1.0], [1.0]]) / np.sqrt(2))
        np.testing.assert_allclose(s.amplitudes, [0, 2**-0.5, 2**-0.5, 0])

    def test_slater_amplitudes_are_minors(self):
        C = random_orthonormal(5, 2, seed=3)
        s = make_slater(5, 2, C)
        # sites 1 and 3 occupied -> index 2**3 + 2**1
        np.testing.assert_allclose(s.amplitudes[10], np.linalg.det(C[[1, 3]]), atol=1e-14)
        assert s.kind == "slater"

    def test_slater_errors(self):
        with pytest.raises(ValueError, match="orthonormal"):
            make_slater(3, 2, np.ones((3, 2)))
        with pytest.raises(ValueError):
            make_slater(2, 3, np.eye(3)[:2])

    def test_random_mps_deterministic(self):
        a = make_random_mps(6, 2, 2, 11)
        b = make_random_mps(6, 2, 2, 11)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_random_mps_chi_one_is_product(self):
        s = make_random_mps(5, 2, 1, 4)
        for j in range(1, 5):
            assert schmidt(s, j).rank == 1

    @pytest.mark.parametrize("chi", [1, 2, 3])
    def test_random_mps_rank_bound(self, chi):
        s = make_random_mps(6, 2, chi, 5)
        for j in range(1, 6):
            assert schmidt(s, j).rank <= min(chi, 2**j, 2 ** (6 - j))

    def test_budget(self, monkeypatch):
        monkeypatch.setenv("QMIORDER_MAX_AMPLITUDES", "64")
        make_ghz(6)
        with pytest.raises(BudgetError):
            make_ghz(7)


class TestTypes:
    def test_dense_state_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            DenseState(2, 2, [1, 1, 0, 0])

    def test_dense_state_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            DenseState(2, 2, [1, 0, 0])

    def test_density_rejects_non_psd(self):
        with pytest.raises(ValueError, match="negative"):
            DensityMatrix(np.diag([1.2, -0.2]))

    def test_density_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.1], [0.0, 0.5]]))

    def test_mps_shape_checks(self):
        with pytest.raises(ValueError):
            MatrixProductState(2, 2, (np.ones((1, 2, 2)), np.ones((3, 2, 1))))
        with pytest.raises(ValueError):
            MatrixProductState(2, 2, (np.ones((2, 2, 2)), np.ones((2, 2, 1))))

    def test_site_subset(self):
        assert site_subset([3, 1], 4) == (1, 3)
        for bad in ([], [1, 1], [4], [-1]):
            with pytest.raises(ValueError):
                site_subset(bad, 4)


class TestSchmidt:
    def test_product(self):
        s = make_product_state(4, 2, [[1, 2]])
        for j in range(1, 4):
            np.testing.assert_allclose(schmidt(s, j).values[0], 1.0)
            assert schmidt(s, j).rank == 1

    def test_ghz(self, ghz4):
        np.testing.assert_allclose(schmidt(ghz4, 2).values[:2], [2**-0.5, 2**-0.5])
        assert schmidt(ghz4, 2).rank == 2

    def test_out_of_range(self, ghz4):
        for j in (0, 4):
            with pytest.raises(ValueError):
                schmidt(ghz4, j)

    @pytest.mark.parametrize("state", [make_w(4), make_random_mps(5, 2, 3, 1), random_state(4, 3, 2)])
    def test_matches_reduced_density(self, state):
        for j in range(1, state.L):
            p = np.sort(schmidt(state, j).probabilities)[::-1]
            assert abs(p.sum() - 1) < 1e-12
            evals = reduced_density(state, range(j)).eigenvalues
            n = min(p.size, evals.size)
            np.testing.assert_allclose(p[:n], evals[:n], atol=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_complement_symmetry(self, seed):
        s = random_state(5, 2, seed)
        mirrored = permute_sites(s, list(range(4, -1, -1)))
        for j in range(1, 5):
            a = schmidt(s, j).values
            b = schmidt(mirrored, 5 - j).values
            n = min(a.size, b.size)
            np.testing.assert_allclose(a[:n], b[:n], atol=1e-12)


class TestReducedDensity:
    def test_ghz_single_site(self, ghz4):
        np.testing.assert_allclose(reduced_density(ghz4, [0]).matrix, np.diag([0.5, 0.5]), atol=1e-15)

    def test_ghz_non_adjacent(self, ghz4):
        rho = reduced_density(ghz4, [0, 2]).matrix
        np.testing.assert_allclose(rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
        np.testing.assert_allclose(rho, brute_partial_trace(ghz4, [0, 2]), atol=1e-15)

    @pytest.mark.parametrize("keep", [[1], [0, 3], [1, 2], [0, 2, 3], [3, 1]])
    def test_against_brute_force(self, keep):
        s = random_state(4, 2, 9)
        rho = reduced_density(s, keep).matrix
        np.testing.assert_allclose(rho, brute_partial_trace(s, sorted(keep)), atol=1e-13)

    def test_qutrits(self):
        s = random_state(3, 3, 1)
        np.testing.assert_allclose(reduced_density(s, [0, 2]).matrix, brute_partial_trace(s, [0, 2]), atol=1e-13)

    def test_full_subset_is_projector(self):
        s = random_state(3, 2, 4)
        rho = reduced_density(s, [0, 1, 2]).matrix
        np.testing.assert_allclose(rho, np.outer(s.amplitudes, s.amplitudes.conj()), atol=1e-14)

    def test_density_partial_trace_agrees(self):
        s = random_state(4, 2, 5)
        full = reduced_density(s, [0, 1, 2, 3])
        np.testing.assert_allclose(
            full.partial_trace([1, 3]).matrix, reduced_density(s, [1, 3]).matrix, atol=1e-14
        )

    def test_out_of_range(self, ghz4):
        with pytest.raises(ValueError):
            reduced_density(ghz4, [4])


class TestMps:
    def test_exact_roundtrip(self):
        for seed in range(5):
            s = random_state(6, 2, seed)
            mps, errors = to_mps(s)
            assert np.max(np.abs(mps.to_vector() - s.amplitudes)) <= 1e-10
            assert np.all(errors < 1e-20)
            assert mps.bond_dims == (1, 2, 4, 8, 4, 2, 1)

    def test_product_chi_one(self):
        s = make_product_state(4, 2, [[1, 2], [3, 1], [1, 1], [0, 1]])
        mps, errors = to_mps(s, 1)
        np.testing.assert_allclose(errors, 0, atol=1e-15)
        np.testing.assert_allclose(mps.to_vector(), s.amplitudes, atol=1e-14)

    def test_ghz_chi_one(self, ghz4):
        _, errors = to_mps(ghz4, 1)
        np.testing.assert_allclose(errors, [0.5, 0, 0], atol=1e-15)

    def test_bad_chi(self, ghz4):
        with pytest.raises(ValueError):
            to_mps(ghz4, 0)


class TestTruncationProfile:
    def test_ghz_fixture(self, ghz4):
        prof = truncation_profile(ghz4, 1)
        np.testing.assert_allclose(prof.cut_errors, [0.5, 0.5, 0.5], atol=1e-15)
        assert abs(prof.total - 1.5) <= 1e-12
        assert prof.realized <= prof.total + 1e-9

    def test_no_truncation(self):
        s = make_random_mps(6, 2, 3, 2)
        prof = truncation_profile(s, 3)
        np.testing.assert_allclose(prof.cut_errors, 0, atol=1e-20)
        assert prof.realized < 1e-20

    def test_tail_weight(self):
        assert abs(tail_weight(np.sqrt([0.9, 0.1]), 1) - 0.1) < 1e-15

    @pytest.mark.parametrize("seed", range(20))
    def test_realized_below_sum(self, seed):
        rng = np.random.default_rng(seed)
        s = random_state(int(rng.integers(3, 9)), 2, seed)
        for chi in (1, 2, 3):
            prof = truncation_profile(s, chi)
            assert prof.realized <= prof.total + 1e-9


class TestPermuteSites:
    def test_identity(self):
        s = random_state(4, 2, 0)
        assert np.array_equal(permute_sites(s, [0, 1, 2, 3]).amplitudes, s.amplitudes)

    def test_swap_product(self):
        a, b = np.array([1.0, 0.0]), np.array([0.6, 0.8])
        s = make_product_state(2, 2, [a, b])
        expected = make_product_state(2, 2, [b, a])
        np.testing.assert_allclose(permute_sites(s, [1, 0]).amplitudes, expected.amplitudes)

    def test_moves_basis_state(self):
        s = basis_state(3, 3, [2, 0, 1])
        moved = permute_sites(s, [2, 0, 1])
        np.testing.assert_allclose(moved.amplitudes, basis_state(3, 3, [1, 2, 0]).amplitudes)

    @given(st.permutations(range(5)), st.permutations(range(5)))
    @settings(max_examples=40, deadline=None)
    def test_group_action(self, p1, p2):
        s = random_state(5, 2, 1)
        two_steps = permute_sites(permute_sites(s, p1), p2)
        composed = permute_sites(s, np.asarray(p1)[list(p2)])
        assert np.max(np.abs(two_steps.amplitudes - composed.amplitudes)) <= 1e-12

    @pytest.mark.parametrize("perm", [[1, 0, 2], [2, 0, 1], [1, 2, 0, 3], [3, 2, 1, 0]])
    def test_fermionic_matches_slater_rows(self, perm):
        L = len(perm)
        C = random_orthonormal(L, 2, seed=L)
        s = make_slater(L, 2, C)
        moved = permute_sites(s, perm, fermionic=True)
        expected = make_slater(L, 2, C[perm])
        np.testing.assert_allclose(moved.amplitudes, expected.amplitudes, atol=1e-14)

    def test_fermionic_swap_flips_doubly_occupied_sign(self):
        # |110> picks up a sign when its two fermions trade places
        s = basis_state(3, 2, [1, 1, 0])
        moved = permute_sites(s, [1, 0, 2], fermionic=True)
        np.testing.assert_allclose(moved.amplitudes, -s.amplitudes)

    def test_fermionic_needs_qubits(self):
        with pytest.raises(ValueError):
            permute_sites(random_state(2, 3, 0), [1, 0], fermionic=True)

    def test_norm_preserved(self):
        s = random_state(5, 2, 3)
        moved = permute_sites(s, [4, 2, 0, 1, 3], fermionic=True)
        assert abs(np.linalg.norm(moved.amplitudes) - 1) < 1e-12

    def test_bad_perm(self):
        with pytest.raises(ValueError):
            permute_sites(random_state(3, 2, 0), [0, 0, 1])

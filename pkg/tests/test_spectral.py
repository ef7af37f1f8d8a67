import numpy as np
import pytest

from conftest import (
    delayed_resonator,
    random_dc_dominant_statespace,
    random_stable_statespace,
)
from peakgain import (
    RationalTransferFunction,
    circulant,
    circulant_coefficients,
    circulant_eigenvalues,
    dft_matrix,
    diagonalization_residual,
    dominant_bin,
    freq_response,
    hinf_grid_oracle,
    lift,
    max_gain_reset_based,
    periodic_response_matrix,
    reversed_circulant,
    reversed_spectrum,
    symmetric_eig_oracle,
    tf_to_ss,
    time_reversal_matrix,
    time_reverse,
)

SQRT8 = 2.0 * np.sqrt(2.0)


class TestTimeReversal:
    def test_reverses(self):
        assert np.array_equal(time_reverse([1.0, 2.0, 3.0]), [3.0, 2.0, 1.0])

    def test_palindrome_is_fixed(self):
        v = np.array([1.0, 4.0, 4.0, 1.0])
        assert np.array_equal(time_reverse(v), v)

    def test_involution_is_exact(self):
        v = np.random.default_rng(0).standard_normal(17)
        assert np.array_equal(time_reverse(time_reverse(v)), v)

    def test_matrix_matches_operator(self):
        v = np.random.default_rng(1).standard_normal(6)
        assert np.allclose(time_reversal_matrix(6) @ v, time_reverse(v))


class TestDftMatrix:
    @pytest.mark.parametrize("N", [1, 2, 3, 8, 13, 64])
    def test_unitary(self, N):
        F = dft_matrix(N)
        assert np.abs(F.conj().T @ F - np.eye(N)).max() < 1e-10
        assert np.abs(F @ F.conj().T - np.eye(N)).max() < 1e-10


class TestCirculant:
    def test_first_row_and_shift_pattern(self):
        C = circulant([1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(C[0], [1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(C[1], [4.0, 1.0, 2.0, 3.0])
        assert np.array_equal(C[3], [2.0, 3.0, 4.0, 1.0])

    def test_identity_coefficient_eigenvalues(self):
        lam = circulant_eigenvalues(np.array([1.0, 0.0, 0.0, 0.0, 0.0]))
        assert np.abs(lam - 1.0).max() < 1e-12

    def test_two_point_eigenvalues(self):
        lam = circulant_eigenvalues(np.array([0.0, 1.0]))
        assert np.abs(lam - np.array([1.0, -1.0])).max() < 1e-12

    def test_four_point_eigenvalues(self):
        lam = circulant_eigenvalues(np.array([1.0, 2.0, 3.0, 4.0]))
        expected = np.array([10.0, -2.0 + 2.0j, -2.0, -2.0 - 2.0j])
        assert np.abs(lam - expected).max() < 1e-12

    def test_eigenvalues_are_frequency_response_samples(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            ss = random_stable_statespace(rng)
            N = int(rng.integers(2, 24))
            lam = circulant_eigenvalues(circulant_coefficients(ss, N))
            omegas = -2.0 * np.pi * np.arange(N) / N
            expected = freq_response(ss, omegas)
            assert np.abs(lam - expected).max() < 1e-9 * (1 + np.abs(expected).max())


class TestDiagonalization:
    def test_scaled_identity(self):
        max_off, diag = diagonalization_residual(3.0 * np.eye(5))
        assert max_off < 1e-12
        assert np.abs(diag - 3.0).max() < 1e-12

    def test_cyclic_shift(self):
        max_off, diag = diagonalization_residual(circulant([0.0, 0.0, 0.0, 1.0]))
        assert max_off < 1e-12
        assert np.abs(diag - np.array([1.0, 1.0j, -1.0, -1.0j])).max() < 1e-12

    def test_non_circulant_leaves_residual(self):
        rng = np.random.default_rng(3)
        S = rng.standard_normal((6, 6))
        S = S + S.T + np.diag(np.arange(6.0))
        max_off, _ = diagonalization_residual(S)
        assert max_off > 1e-3

    def test_periodic_response_diagonalizes(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            ss = random_stable_statespace(rng)
            N = int(rng.integers(2, 24))
            M = periodic_response_matrix(lift(ss, N))
            max_off, diag = diagonalization_residual(M)
            assert max_off < 1e-8 * (1 + np.abs(diag).max())
            omegas = -2.0 * np.pi * np.arange(N) / N
            expected = freq_response(ss, omegas)
            assert np.abs(diag - expected).max() < 1e-8 * (1 + np.abs(expected).max())


class TestReversedCirculant:
    def test_two_point_identity(self):
        assert np.array_equal(reversed_circulant(np.array([0.0, 1.0])), np.eye(2))

    def test_single_coefficient_scales_reversal(self):
        R = reversed_circulant(np.array([2.0, 0.0, 0.0, 0.0, 0.0]))
        assert np.array_equal(R, 2.0 * time_reversal_matrix(5))

    def test_row_pattern(self):
        R = reversed_circulant(np.array([1.0, 2.0, 3.0, 4.0]))
        assert np.array_equal(R[0], [2.0, 3.0, 4.0, 1.0])
        assert np.array_equal(R[-1], [1.0, 2.0, 3.0, 4.0])
        assert np.array_equal(R, R.T)


class TestReversedSpectrum:
    def test_two_point(self):
        rev = reversed_spectrum(np.array([1.0 + 0.0j, -1.0 + 0.0j]))
        assert np.allclose(rev, [1.0, 1.0])

    def test_four_point(self):
        lam = np.array([10.0, -2.0 + 2.0j, -2.0, -2.0 - 2.0j])
        rev = reversed_spectrum(lam)
        assert np.allclose(rev, [10.0, SQRT8, 2.0, -SQRT8])

    @pytest.mark.parametrize("N", [4, 5, 6, 9])
    def test_all_ones_splits_into_sign_pairs(self, N):
        lam = circulant_eigenvalues(np.eye(N)[0])
        rev = reversed_spectrum(lam)
        expected = np.ones(N)
        expected[(N + 1) // 2 :] = -1.0
        if N % 2 == 0:
            expected[N // 2] = -1.0
        assert np.allclose(rev, expected)

    def test_magnitudes_preserved(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = rng.standard_normal(int(rng.integers(2, 33)))
            lam = circulant_eigenvalues(a)
            rev = reversed_spectrum(lam)
            assert np.allclose(np.sort(np.abs(rev)), np.sort(np.abs(lam)), atol=1e-9)

    def test_complex_dc_entry_diagnosed(self):
        with pytest.raises(ValueError, match="lambda_0"):
            reversed_spectrum(np.array([1.0 + 0.5j, 0.0j]))

    def test_complex_half_rate_entry_diagnosed(self):
        with pytest.raises(ValueError, match="lambda_2"):
            reversed_spectrum(np.array([1.0, 0.3 + 0.1j, 2.0 + 1.0j, 0.3 - 0.1j]))


class TestJacobiOracle:
    def test_diagonal_input_sorted(self):
        w = symmetric_eig_oracle(np.diag([3.0, 1.0, 2.0]))
        assert np.array_equal(w, [3.0, 2.0, 1.0])

    def test_two_by_two_exchange(self):
        w = symmetric_eig_oracle(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(w, [1.0, -1.0], atol=1e-12)

    def test_matches_reversed_spectrum(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal(16)
        w = symmetric_eig_oracle(reversed_circulant(a))
        rev = np.sort(reversed_spectrum(circulant_eigenvalues(a)))[::-1]
        assert np.abs(w - rev).max() < 1e-9 * (1 + np.abs(rev).max())

    def test_eigenvectors_satisfy_definition(self):
        rng = np.random.default_rng(7)
        S = rng.standard_normal((12, 12))
        S = 0.5 * (S + S.T)
        w, V = symmetric_eig_oracle(S, return_vectors=True)
        assert np.abs(S @ V - V * w).max() < 1e-8 * (1 + np.abs(w).max())
        assert np.abs(V.T @ V - np.eye(12)).max() < 1e-9

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            symmetric_eig_oracle(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_sweep_cap_diagnosed(self):
        S = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(RuntimeError, match="sweeps"):
            symmetric_eig_oracle(S, max_sweeps=0)

    def test_matches_reversed_spectrum_across_sizes(self):
        rng = np.random.default_rng(8)
        for trial in range(40):
            ss = random_stable_statespace(rng)
            N = 2 + trial % 31
            spec = circulant_coefficients(ss, N)
            w = symmetric_eig_oracle(reversed_circulant(spec))
            rev = np.sort(reversed_spectrum(circulant_eigenvalues(spec)))[::-1]
            assert np.abs(w - rev).max() < 1e-9 * (1 + np.abs(rev).max())


class TestResetBasedGain:
    def test_zero_matrix(self):
        assert max_gain_reset_based(np.zeros((6, 6))) == 0.0

    def test_scaled_identity(self):
        assert max_gain_reset_based(2.0 * np.eye(8)) == pytest.approx(2.0, abs=1e-12)

    def test_delayed_resonator_sees_nothing(self):
        J = lift(tf_to_ss(delayed_resonator()), 50).J
        assert max_gain_reset_based(J) == 0.0

    def test_equals_largest_singular_value(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            ss = random_stable_statespace(rng)
            N = int(rng.integers(2, 33))
            J = lift(ss, N).J
            expected = float(np.linalg.svd(J, compute_uv=False)[0])
            assert max_gain_reset_based(J) == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_oracle_and_lapack_routes_agree(self):
        rng = np.random.default_rng(10)
        ss = random_stable_statespace(rng)
        J = lift(ss, 64).J
        via_oracle = max_gain_reset_based(J, oracle_size_limit=64)
        via_lapack = max_gain_reset_based(J, oracle_size_limit=2)
        assert via_oracle == pytest.approx(via_lapack, rel=1e-9)

    def test_non_toeplitz_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            max_gain_reset_based(np.arange(9.0).reshape(3, 3))


class TestEigenvectorReversalSymmetry:
    def test_dc_dominant_top_eigenvector_is_reversal_symmetric(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            ss = random_dc_dominant_statespace(rng)
            N = int(rng.integers(3, 25))
            R = reversed_circulant(circulant_coefficients(ss, N))
            w, V = symmetric_eig_oracle(R, return_vectors=True)
            assert w[0] > 0 and w[0] - w[1] > 1e-9 * (1 + abs(w[0]))
            v = V[:, 0]
            assert np.linalg.norm(time_reverse(v) - v) < 1e-8

    def test_interior_peak_breaks_the_symmetry(self):
        # symmetry of the top eigenvector holds exactly when the dominant
        # response sample is real positive (peak at frequency zero, say); a
        # resonance away from the grid's real axis rotates the eigenvector
        # within its frequency pair, so reversal changes it
        ss = tf_to_ss(delayed_resonator())
        R = reversed_circulant(circulant_coefficients(ss, 50))
        w, V = symmetric_eig_oracle(R, return_vectors=True)
        v = V[:, 0]
        assert w[0] - w[1] > 1e-6
        mismatch = min(
            np.linalg.norm(time_reverse(v) - v), np.linalg.norm(time_reverse(v) + v)
        )
        assert mismatch > 1e-3


class TestTopOfSpectrum:
    def test_reversed_top_equals_peak_magnitude_generically(self):
        rng = np.random.default_rng(12)
        checked = 0
        for _ in range(30):
            ss = random_stable_statespace(rng)
            N = int(rng.integers(3, 25))
            lam = circulant_eigenvalues(circulant_coefficients(ss, N))
            rev = reversed_spectrum(lam)
            peak = int(np.argmax(np.abs(lam)))
            interior = 0 < peak < N / 2 or 0 < N - peak < N / 2
            at_dc_positive = np.abs(lam).argmax() == 0 and lam[0].real > 0
            if interior or at_dc_positive:
                assert rev.max() == pytest.approx(np.abs(lam).max(), rel=1e-12)
                checked += 1
        assert checked > 10

    def test_demo_plant_grid_peak_tracks_oracle(self):
        tf = delayed_resonator()
        lam = circulant_eigenvalues(circulant_coefficients(tf_to_ss(tf), 50))
        rev_top = reversed_spectrum(lam).max()
        oracle = hinf_grid_oracle(tf)
        # only frequency discretization separates the two at this batch length
        assert abs(rev_top - oracle) / oracle < 0.05
        assert rev_top <= oracle + 1e-12


class TestDominantBin:
    def test_pure_tone_signal(self):
        N = 32
        k = np.arange(N)
        u = np.cos(2.0 * np.pi * 3 * k / N + 0.4)
        assert dominant_bin(u) == 3

    def test_spectrum_input_and_tie_break(self):
        lam = np.array([1.0, 5.0, 5.0, 5.0, 1.0, 5.0])  # folded ties at 1, 2, 3
        assert dominant_bin(lam.astype(complex)) == 1

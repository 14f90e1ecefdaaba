"""Native gate matrices and canonical PhXZ extraction."""

import numpy as np
import pytest
from scipy.linalg import expm

from qcanet.gates import (
    CH_MATRIX,
    CZ_MATRIX,
    HADAMARD,
    PAULI,
    Gate,
    cphase_matrix,
    identity_phxz,
    is_identity_phxz,
    k_matrix,
    merge_to_phxz,
    phxz,
    phxz_from_matrix,
    phxz_matrix,
    rx_matrix,
    rz_matrix,
    xpow_matrix,
    ypow_matrix,
    zpow_matrix,
)
from helpers import max_dev_up_to_phase, random_unitary2


class TestMatrixConstructors:
    def test_pow_gates_at_full_turn_are_paulis(self):
        np.testing.assert_allclose(xpow_matrix(1.0), PAULI["x"], atol=1e-15)
        np.testing.assert_allclose(ypow_matrix(1.0), PAULI["y"], atol=1e-15)
        np.testing.assert_allclose(zpow_matrix(1.0), PAULI["z"], atol=1e-15)

    def test_pow_gates_at_zero_are_identity(self):
        for fn in (xpow_matrix, ypow_matrix, zpow_matrix):
            np.testing.assert_allclose(fn(0.0), np.eye(2), atol=1e-15)

    def test_sqrt_x(self):
        expected = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2
        np.testing.assert_allclose(xpow_matrix(0.5), expected, atol=1e-15)

    def test_rx_rz_match_exponentials(self):
        # symmetric convention: R_P(t) = exp(-i t P / 2)
        for t in (-2.3, -0.4, 0.0, 0.7, np.pi, 4.0):
            np.testing.assert_allclose(
                rx_matrix(t), expm(-0.5j * t * PAULI["x"]), atol=1e-12
            )
            np.testing.assert_allclose(
                rz_matrix(t), expm(-0.5j * t * PAULI["z"]), atol=1e-12
            )

    def test_pow_vs_rotation_phase(self):
        # X^t = e^{i pi t / 2} Rx(pi t), same for the other axes
        for t in (0.25, 0.5, -0.75, 1.0):
            np.testing.assert_allclose(
                xpow_matrix(t), np.exp(0.5j * np.pi * t) * rx_matrix(np.pi * t), atol=1e-12
            )

    def test_cphase_pi_is_cz(self):
        np.testing.assert_allclose(cphase_matrix(np.pi), CZ_MATRIX, atol=1e-15)

    def test_k_matrix_unitary(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            params = rng.uniform(-np.pi, np.pi, size=5)
            mat = k_matrix(*params)
            np.testing.assert_allclose(mat @ mat.conj().T, np.eye(4), atol=1e-12)

    def test_k_matrix_ideal_values(self):
        mat = k_matrix(np.pi / 4, phi=0.3)
        c = np.cos(np.pi / 4)
        assert abs(mat[1, 1] - c) < 1e-15
        assert abs(mat[1, 2] - (-1j * c)) < 1e-15
        assert abs(mat[3, 3] - np.exp(-0.3j)) < 1e-15

    def test_k_conserves_excitation_number(self):
        # block diagonal in {00}, {01, 10}, {11}
        mat = k_matrix(0.7, 0.2, -0.4, 0.9, 1.3)
        assert mat[0, 0] == 1.0
        for row, col in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]:
            assert mat[row, col] == 0.0
            assert mat[col, row] == 0.0

    def test_ch_matrix_blocks(self):
        np.testing.assert_allclose(CH_MATRIX[:2, :2], np.eye(2), atol=1e-15)
        np.testing.assert_allclose(CH_MATRIX[2:, 2:], HADAMARD, atol=1e-15)


class TestGateObject:
    def test_single_qubit_site_count(self):
        with pytest.raises(ValueError):
            Gate("phxz", (1, 2), (0.0, 0.0, 0.0))

    def test_two_qubit_needs_distinct_sites(self):
        with pytest.raises(ValueError):
            Gate("cz", (3, 3))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Gate("swap", (1, 2))

    def test_matrix_dispatch(self):
        np.testing.assert_allclose(Gate("cz", (1, 2)).matrix(), CZ_MATRIX)
        np.testing.assert_allclose(Gate("x", (4,)).matrix(), PAULI["x"])
        np.testing.assert_allclose(
            Gate("ypow", (2,), (0.25,)).matrix(), ypow_matrix(0.25)
        )

    def test_is_two_qubit(self):
        assert Gate("k", (1, 2), (0.1, 0, 0, 0, 0)).is_two_qubit
        assert not Gate("z", (1,)).is_two_qubit


class TestPhxzCanonicalization:
    def test_round_trip_random(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            mat = random_unitary2(rng) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            a, x, z = phxz_from_matrix(mat)
            assert 0.0 <= x <= 1.0
            assert -1.0 < a <= 1.0
            assert -1.0 < z <= 1.0
            assert max_dev_up_to_phase(phxz_matrix(a, x, z), mat) < 1e-9

    def test_pure_z_rotation_pins_a(self):
        a, x, z = phxz_from_matrix(rz_matrix(0.8))
        assert x == 0.0
        assert a == 0.0
        assert abs(z - 0.8 / np.pi) < 1e-12

    def test_full_x_pins_a(self):
        a, x, z = phxz_from_matrix(PAULI["x"] @ rz_matrix(0.6))
        assert x == 1.0
        assert a == 0.0

    def test_identity_is_origin(self):
        assert phxz_from_matrix(np.eye(2)) == (0.0, 0.0, 0.0)
        assert phxz_from_matrix(1j * np.eye(2)) == (0.0, 0.0, 0.0)

    def test_pauli_x_canonical_form(self):
        a, x, z = phxz_from_matrix(PAULI["x"])
        assert (a, x, z) == (0.0, 1.0, 0.0)

    def test_double_hadamard_merges_to_identity(self):
        merged = merge_to_phxz(1, [HADAMARD, HADAMARD])
        assert is_identity_phxz(merged)

    def test_hadamard(self):
        a, x, z = phxz_from_matrix(HADAMARD)
        assert max_dev_up_to_phase(phxz_matrix(a, x, z), HADAMARD) < 1e-12
        assert abs(x - 0.5) < 1e-12  # H is a half x-turn about a tilted axis

    def test_rejects_nonunitary(self):
        with pytest.raises(ValueError):
            phxz_from_matrix(np.array([[1.0, 0.0], [0.0, 2.0]]))
        with pytest.raises(ValueError):
            phxz_from_matrix(np.eye(3))

    def test_definition_consistency(self):
        # PhXZ(a, x, z) = Z^z Z^a X^x Z^-a
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, x, z = rng.uniform(-1, 1, size=3)
            expected = (
                zpow_matrix(z) @ zpow_matrix(a) @ xpow_matrix(x) @ zpow_matrix(-a)
            )
            np.testing.assert_allclose(phxz_matrix(a, x, z), expected, atol=1e-12)


class TestMergeAndIdentity:
    def test_merge_temporal_order(self):
        rng = np.random.default_rng(5)
        mats = [random_unitary2(rng) for _ in range(4)]
        total = mats[3] @ mats[2] @ mats[1] @ mats[0]
        merged = merge_to_phxz(2, mats)
        assert merged.sites == (2,)
        assert max_dev_up_to_phase(merged.matrix(), total) < 1e-9

    def test_merge_inverse_pair_is_identity(self):
        rng = np.random.default_rng(9)
        mat = random_unitary2(rng)
        merged = merge_to_phxz(1, [mat, mat.conj().T])
        assert is_identity_phxz(merged)

    def test_identity_phxz_flags(self):
        assert is_identity_phxz(identity_phxz(3))
        assert is_identity_phxz(phxz(1, 0.0, 0.0, 2.0))  # z wraps mod 2
        assert not is_identity_phxz(phxz(1, 0.0, 0.5, 0.0))
        assert not is_identity_phxz(phxz(1, 0.0, 0.0, 1.0))
        assert not is_identity_phxz(Gate("x", (1,)))

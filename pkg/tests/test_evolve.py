import numpy as np
import pytest

from helpers import dense_cycle_oracle, dense_site_oracle, random_unitary2

from qcanet.evolve import (
    Trajectory,
    apply_cycle,
    commutator_invariant_norm,
    cycle_unitary,
    evolve,
    export_trajectory,
    load_trajectory,
    site_update_unitary,
)
from qcanet.invariant import invariant_eigenvalue, invariant_table
from qcanet.rules import RuleSpec, goldilocks_rule
from qcanet.states import NormDriftError, basis_state, central_flip, population


class TestWorkedExamples:
    def test_single_cycle_three_sites(self):
        # |010>: site 2 sees (0,0) and idles, sites 1 and 3 each see one
        # excited neighbor and get a Hadamard
        state = basis_state("010")
        apply_cycle(state, goldilocks_rule("H"), 3)
        expected = np.zeros(8, dtype=complex)
        for bits in ("010", "011", "110", "111"):
            expected[int(bits, 2)] = 0.5
        np.testing.assert_allclose(state, expected, atol=1e-12)

    def test_bitflip_activation_is_classical(self):
        # V=X keeps basis states on basis states
        traj = evolve("00100", goldilocks_rule("X"), 8)
        for state in traj.states:
            probs = np.abs(state) ** 2
            assert np.max(probs) > 1 - 1e-12

    def test_population_initial(self):
        traj = evolve("01100", goldilocks_rule("H"), 0)
        np.testing.assert_allclose(traj.populations[0], [0, 1, 1, 0, 0], atol=1e-12)


class TestDenseAgreement:
    @pytest.mark.parametrize("length", [1, 2, 3, 4, 5])
    @pytest.mark.parametrize("number", [6, 1, 9, 0, 15])
    def test_site_unitary_matches_kron_oracle(self, length, number):
        rule = RuleSpec.from_number(number, "H")
        for site in range(1, length + 1):
            np.testing.assert_allclose(
                site_update_unitary(rule, length, site),
                dense_site_oracle(rule, length, site),
                atol=1e-12,
            )

    @pytest.mark.parametrize("length", [1, 2, 3, 4, 6, 7])
    def test_cycle_unitary_matches_kron_oracle(self, length):
        rng = np.random.default_rng(11)
        for rule in (goldilocks_rule("H"), RuleSpec.from_number(5, random_unitary2(rng))):
            np.testing.assert_allclose(
                cycle_unitary(rule, length),
                dense_cycle_oracle(rule, length),
                atol=1e-12,
            )

    def test_cycle_unitary_is_unitary(self):
        u = cycle_unitary(goldilocks_rule("H"), 6)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(64), atol=1e-10)

    def test_apply_cycle_matches_dense_on_random_state(self):
        length = 7
        rng = np.random.default_rng(3)
        state = rng.normal(size=1 << length) + 1j * rng.normal(size=1 << length)
        state /= np.linalg.norm(state)
        rule = goldilocks_rule("H")
        expected = dense_cycle_oracle(rule, length) @ state
        apply_cycle(state, rule, length)
        np.testing.assert_allclose(state, expected, atol=1e-12)

    def test_populations_match_dense_evolution(self):
        # statevector sweep against explicit matrix powers
        length, cycles = 9, 12
        rule = goldilocks_rule("H")
        traj = evolve(central_flip(length), rule, cycles)
        u = dense_cycle_oracle(rule, length)
        state = basis_state(central_flip(length))
        for t in range(1, cycles + 1):
            state = u @ state
            np.testing.assert_allclose(traj.populations[t], population(state), atol=1e-9)

    def test_dense_capacity_guard(self):
        with pytest.raises(ValueError, match="dense"):
            cycle_unitary(goldilocks_rule("H"), 13)


class TestInvariantConservation:
    @pytest.mark.parametrize("length", [2, 3, 5, 8])
    def test_support_stays_in_sector(self, length):
        rng = np.random.default_rng(17)
        table = invariant_table(length)
        activations = ["H", "X"] + [random_unitary2(rng) for _ in range(3)]
        for act in activations:
            rule = RuleSpec.from_number(6, act)
            initial = central_flip(length)
            target = invariant_eigenvalue(initial)
            state = basis_state(initial)
            for _ in range(12):
                apply_cycle(state, rule, length)
                leak = np.abs(state[table != target])
                assert leak.max() < 1e-10

    def test_commutator_norm_zero_for_rule6(self):
        rng = np.random.default_rng(23)
        for length in (2, 3, 5):
            for act in ("H", "X", random_unitary2(rng)):
                rule = RuleSpec.from_number(6, act)
                assert commutator_invariant_norm(rule, length) < 1e-9

    def test_commutator_norm_detects_violation(self):
        # rule 1 fires on two quiet neighbors and moves strings across sectors
        rule = RuleSpec.from_number(1, "H")
        assert commutator_invariant_norm(rule, 4) > 1e-3

    def test_commutator_norm_matches_dense_oracle(self):
        from qcanet.invariant import invariant_table as table_fn

        length = 4
        rule = RuleSpec.from_number(3, "H")
        diag = np.diag(table_fn(length).astype(float))
        u = dense_cycle_oracle(rule, length)
        expected = np.linalg.norm(diag @ u - u @ diag, "fro")
        np.testing.assert_allclose(commutator_invariant_norm(rule, length), expected, atol=1e-10)


class TestEvolveApi:
    def test_reflection_symmetry_odd_chain(self):
        traj = evolve(central_flip(9), goldilocks_rule("H"), 10)
        np.testing.assert_allclose(traj.populations, traj.populations[:, ::-1], atol=1e-10)

    def test_norm_drift_raises(self):
        state = basis_state("0101") * 1.1
        with pytest.raises(NormDriftError):
            apply_cycle(state, goldilocks_rule("H"), 4)

    def test_record_states_default(self):
        assert evolve("010", goldilocks_rule("H"), 2).states is not None
        traj = evolve("010", goldilocks_rule("H"), 2, record_states=False)
        assert traj.states is None
        assert traj.t_max == 2

    def test_rejects_negative_cycles(self):
        with pytest.raises(ValueError):
            evolve("010", goldilocks_rule("H"), -1)

    def test_export_roundtrip(self, tmp_path):
        traj = evolve("00100", goldilocks_rule("H"), 4)
        path = tmp_path / "traj.json"
        export_trajectory(traj, path, write_states=True)
        back = load_trajectory(path)
        assert back.initial == traj.initial
        assert back.rule.number == 6
        np.testing.assert_allclose(back.populations, traj.populations, atol=1e-12)
        raw = np.fromfile(tmp_path / "traj_states" / "cycle_4.c128", dtype="<c16")
        np.testing.assert_allclose(raw, traj.states[4], atol=1e-12)

    def test_export_is_deterministic(self, tmp_path):
        traj = evolve("0110", goldilocks_rule("H"), 3)
        export_trajectory(traj, tmp_path / "a.json")
        export_trajectory(traj, tmp_path / "b.json")
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

import numpy as np
import pytest

import spinsim as ss
from spinsim.errors import CapabilityError, ConfigError

from conftest import random_product_state, random_state
from oracles import (SZ, circuit_unitary, embed_gate, phase_aligned_distance,
                     place, propagator, quench_dense)


class TestZeroState:
    def test_single_qubit(self):
        assert np.array_equal(ss.zero_state(1).amplitudes, [1, 0])

    def test_three_qubits(self):
        state = ss.zero_state(3)
        assert state.amplitudes.shape == (8,)
        assert state.amplitudes[0] == 1.0
        assert np.all(state.amplitudes[1:] == 0)

    def test_normalized(self):
        assert ss.zero_state(7).norm() == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [0, -1, 25])
    def test_cap(self, n):
        with pytest.raises(ConfigError):
            ss.zero_state(n)

    def test_bad_amplitude_length(self):
        with pytest.raises(ValueError):
            ss.StateVector(2, np.zeros(5, dtype=complex))


class TestApplyGate:
    def test_bit_flip(self):
        out = ss.apply_gate(ss.zero_state(1), ss.x(0))
        assert np.allclose(out.amplitudes, [0, 1])

    def test_ry_half_pi(self):
        out = ss.apply_gate(ss.zero_state(1), ss.ry(np.pi / 2, 0))
        assert np.allclose(out.amplitudes, [1, 1] / np.sqrt(2))

    def test_rzz_inverse_pair(self, rng):
        state = ss.StateVector(3, random_state(rng, 3))
        theta = 0.7321
        forward = ss.apply_gate(state, ss.rzz(theta, 0, 2))
        back = ss.apply_gate(forward, ss.rzz(-theta, 0, 2))
        assert np.abs(back.amplitudes - state.amplitudes).max() < 1e-12

    def test_input_state_untouched(self):
        state = ss.zero_state(2)
        ss.apply_gate(state, ss.x(0))
        assert state.amplitudes[0] == 1.0

    def test_target_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            ss.apply_gate(ss.zero_state(2), ss.x(2))

    def test_duplicate_targets(self):
        with pytest.raises(ValueError, match="duplicate"):
            ss.apply_gate(ss.zero_state(2), ss.rxx(0.3, 1, 1))

    def test_cnot(self):
        state = ss.apply_gate(ss.zero_state(2), ss.x(0))
        out = ss.apply_gate(state, ss.cnot(0, 1))
        assert np.allclose(out.amplitudes, [0, 0, 0, 1])  # |11>


class TestKernelOracleEquivalence:
    """Kernel application equals multiplication by the explicitly built unitary."""

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_random_circuit(self, rng, n):
        state = ss.StateVector(n, random_state(rng, n))
        gates = []
        for _ in range(12):
            q = int(rng.integers(n))
            p = int((q + 1 + rng.integers(n - 1)) % n)
            gates.append(rng.choice([
                ss.x(q), ss.y(q), ss.z(q), ss.hadamard(q),
                ss.rx(rng.uniform(-3, 3), q), ss.ry(rng.uniform(-3, 3), q),
                ss.rz(rng.uniform(-3, 3), q),
                ss.rxx(rng.uniform(-3, 3), q, p), ss.ryy(rng.uniform(-3, 3), q, p),
                ss.rzz(rng.uniform(-3, 3), q, p), ss.cnot(q, p),
            ]))
        circuit = ss.Circuit(n, gates)
        kernel = ss.apply_circuit(state, circuit)
        dense = circuit_unitary(circuit) @ state.amplitudes
        assert np.abs(kernel.amplitudes - dense).max() < 1e-12

    def test_controlled_unitary(self, rng):
        n = 3
        state = ss.StateVector(n, random_state(rng, n))
        theta = 1.234
        local = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]], dtype=complex)
        gate = ss.unitary(local, (0,), control=2)
        kernel = ss.apply_gate(state, gate)
        dense = embed_gate(gate, n) @ state.amplitudes
        assert np.abs(kernel.amplitudes - dense).max() < 1e-12

    def test_every_gate_matrix_is_unitary(self):
        gates = [ss.x(0), ss.y(0), ss.z(0), ss.hadamard(0), ss.rx(0.3, 0),
                 ss.ry(-1.1, 0), ss.rz(2.2, 0), ss.rxx(0.5, 0, 1),
                 ss.ryy(0.5, 0, 1), ss.rzz(0.5, 0, 1), ss.cnot(0, 1)]
        for gate in gates:
            m = ss.gate_matrix(gate)
            assert np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() < 1e-12

    def test_zero_angle_rotations_are_identity(self):
        for maker in (ss.rx, ss.ry, ss.rz):
            assert np.allclose(ss.gate_matrix(maker(0.0, 0)), np.eye(2))
        for maker in (ss.rxx, ss.ryy, ss.rzz):
            assert np.allclose(ss.gate_matrix(maker(0.0, 0, 1)), np.eye(4))

    @pytest.mark.parametrize("theta", [0.37, -1.2, 2.9])
    def test_native_two_qubit_rotations_equal_cnot_decomposition(self, theta, rng):
        state = ss.StateVector(2, random_state(rng, 2))
        decompositions = {
            "rzz": ss.Circuit(2, [ss.cnot(0, 1), ss.rz(theta, 1), ss.cnot(0, 1)]),
            "rxx": ss.Circuit(2, [ss.hadamard(0), ss.hadamard(1),
                                  ss.cnot(0, 1), ss.rz(theta, 1), ss.cnot(0, 1),
                                  ss.hadamard(0), ss.hadamard(1)]),
            "ryy": ss.Circuit(2, [ss.rx(np.pi / 2, 0), ss.rx(np.pi / 2, 1),
                                  ss.cnot(0, 1), ss.rz(theta, 1), ss.cnot(0, 1),
                                  ss.rx(-np.pi / 2, 0), ss.rx(-np.pi / 2, 1)]),
        }
        for native, decomposed in (
            (ss.rzz(theta, 0, 1), decompositions["rzz"]),
            (ss.rxx(theta, 0, 1), decompositions["rxx"]),
            (ss.ryy(theta, 0, 1), decompositions["ryy"]),
        ):
            direct = ss.apply_gate(state, native)
            via_cnot = ss.apply_circuit(state, decomposed)
            assert np.abs(direct.amplitudes - via_cnot.amplitudes).max() < 1e-12


class TestUnitarityAndInverse:
    def test_norm_preserved_deep_circuit(self, rng):
        n = 5
        circuit = ss.Circuit(n)
        for _ in range(400):
            q = int(rng.integers(n))
            p = int((q + 1 + rng.integers(n - 1)) % n)
            circuit.append(ss.rxx(rng.uniform(-3, 3), q, p))
            circuit.append(ss.ry(rng.uniform(-3, 3), q))
        out = ss.run_circuit(circuit)
        assert abs(out.norm() - 1.0) < 1e-10

    def test_inverse_composition(self, rng):
        n = 4
        circuit = ss.Circuit(n)
        for _ in range(30):
            q = int(rng.integers(n))
            p = int((q + 1 + rng.integers(n - 1)) % n)
            circuit.append(ss.ryy(rng.uniform(-3, 3), q, p))
            circuit.append(ss.hadamard(q))
            circuit.append(ss.cnot(q, p))
        state = ss.StateVector(n, random_state(rng, n))
        roundtrip = ss.apply_circuit(ss.apply_circuit(state, circuit), circuit.inverse())
        assert np.abs(roundtrip.amplitudes - state.amplitudes).max() < 1e-10


class TestExpectation:
    def test_z_on_zero(self):
        assert ss.expectation(ss.zero_state(1), ss.PauliTerm(1.0, {0: "z"})) == pytest.approx(1.0)

    def test_x_on_plus(self):
        plus = ss.apply_gate(ss.zero_state(1), ss.ry(np.pi / 2, 0))
        assert ss.expectation(plus, ss.PauliTerm(1.0, {0: "x"})) == pytest.approx(1.0)

    def test_zz_product_state_vs_dense(self, rng):
        n = 4
        state = ss.StateVector(n, random_product_state(rng, n))
        term = ss.PauliTerm(1.0, {1: "z", 2: "z"})
        dense = place(n, {1: SZ, 2: SZ})
        expected = np.vdot(state.amplitudes, dense @ state.amplitudes).real
        assert ss.expectation(state, term) == pytest.approx(expected, abs=1e-12)

    def test_linearity(self, rng):
        n = 3
        state = ss.StateVector(n, random_state(rng, n))
        terms = [ss.PauliTerm(0.7, {0: "x", 1: "x"}), ss.PauliTerm(-1.3, {1: "z"}),
                 ss.PauliTerm(2.1, {0: "y", 2: "z"})]
        h = ss.SpinHamiltonian(n, {"x": [terms[0]], "field": [terms[1]], "y": [terms[2]]})
        total = ss.energy(state, h)
        assert total == pytest.approx(sum(ss.expectation(state, t) for t in terms), abs=1e-12)

    def test_coefficient_scales(self, rng):
        state = ss.StateVector(2, random_state(rng, 2))
        base = ss.expectation(state, ss.PauliTerm(1.0, {0: "z"}))
        assert ss.expectation(state, ss.PauliTerm(-2.5, {0: "z"})) == pytest.approx(-2.5 * base)

    def test_term_out_of_range(self):
        with pytest.raises(ValueError):
            ss.expectation(ss.zero_state(2), ss.PauliTerm(1.0, {3: "z"}))


class TestExactEvolve:
    def test_time_zero_identity(self, rng):
        h = ss.quench_hamiltonian(3, 1.0, 1.5)
        state = ss.StateVector(3, random_state(rng, 3))
        out = ss.exact_evolve(state, h, 0.0)
        assert np.abs(out.amplitudes - state.amplitudes).max() < 1e-12

    def test_eigenstate_stationary(self):
        h = ss.quench_hamiltonian(3, 1.0, 2.0)
        w, v = h.eigensystem()
        state = ss.StateVector(3, v[:, 0])
        out = ss.exact_evolve(state, h, 1.7)
        for term in h.terms:
            assert ss.expectation(out, term) == pytest.approx(ss.expectation(state, term), abs=1e-10)

    def test_energy_conserved_neel(self):
        h = ss.quench_hamiltonian(4, 1.0, 1.0)
        state = ss.run_circuit(ss.neel_circuit(4))
        before = ss.energy(state, h)
        after = ss.energy(ss.exact_evolve(state, h, 1.0), h)
        assert after == pytest.approx(before, abs=1e-10)

    def test_matches_scipy_expm(self, rng):
        n = 3
        h = ss.heisenberg_chain(n, 0.9, 0.4, 1.3, hz=0.2)
        state = ss.StateVector(n, random_state(rng, n))
        ours = ss.exact_evolve(state, h, 0.83)
        reference = propagator(h.dense(), 0.83) @ state.amplitudes
        assert np.abs(ours.amplitudes - reference).max() < 1e-10

    def test_embedded_hamiltonian_leaves_extra_qubit(self, rng):
        h = ss.quench_hamiltonian(2, 1.0, 1.0)
        state = ss.StateVector(3, random_state(rng, 3))
        out = ss.exact_evolve(state, h, 0.5)
        hx, hy, hz = quench_dense(2, 1.0, 1.0)
        block = propagator(hx + hy + hz, 0.5)
        reference = place(3, {}).astype(complex)  # identity
        reference = np.kron(np.eye(2), block) @ state.amplitudes
        assert np.abs(out.amplitudes - reference).max() < 1e-10

    def test_oracle_cap(self):
        h = ss.quench_hamiltonian(11, 1.0, 1.0)
        with pytest.raises(CapabilityError):
            ss.exact_evolve(ss.zero_state(11), h, 0.1)


class TestSampleCounts:
    def test_deterministic_outcome(self):
        one = ss.apply_gate(ss.zero_state(1), ss.x(0))
        assert ss.sample_counts(one, 100, seed=3) == {"1": 100}

    def test_balanced_superposition_within_5_sigma(self):
        plus = ss.apply_gate(ss.zero_state(1), ss.ry(np.pi / 2, 0))
        counts = ss.sample_counts(plus, 10_000, seed=11)
        sigma = 50.0
        assert abs(counts["0"] - 5000) < 5 * sigma
        assert abs(counts["1"] - 5000) < 5 * sigma

    def test_counts_sum_to_shots(self, rng):
        state = ss.StateVector(3, random_state(rng, 3))
        counts = ss.sample_counts(state, 777, seed=5)
        assert sum(counts.values()) == 777

    def test_seed_reproducible(self, rng):
        state = ss.StateVector(2, random_state(rng, 2))
        assert ss.sample_counts(state, 500, seed=9) == ss.sample_counts(state, 500, seed=9)

    def test_error_scales_as_inverse_sqrt_shots(self):
        plus = ss.apply_gate(ss.zero_state(1), ss.ry(np.pi / 2, 0))
        mean_errors = []
        for shots in (100, 10_000, 1_000_000):
            errs = []
            for seed in range(12):
                counts = ss.sample_counts(plus, shots, seed=seed)
                estimate = (counts.get("0", 0) - counts.get("1", 0)) / shots
                errs.append(abs(estimate))
            mean_errors.append(np.mean(errs))
        slope = np.polyfit(np.log([100, 10_000, 1_000_000]), np.log(mean_errors), 1)[0]
        assert -0.65 < slope < -0.35

    def test_zero_shots_rejected(self):
        with pytest.raises(ValueError):
            ss.sample_counts(ss.zero_state(1), 0, seed=1)


def test_phase_alignment_helper_sanity(rng):
    a = random_state(rng, 3)
    assert phase_aligned_distance(a, a * np.exp(1j * 0.4)) < 1e-12

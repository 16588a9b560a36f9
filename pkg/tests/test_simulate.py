"""Reversible and statevector execution, sampling, shot calibration."""

import json
import math

import numpy as np
import pytest

from qsynth.circuit import Circuit, Gate, h, ry, x
from qsynth.errors import NonClassicalGate, NonConvergent, TooManyQubits
from qsynth.funcprep import Pmf
from qsynth.simulate import (
    MAX_STATEVECTOR_QUBITS,
    CountHistogram,
    calibrate_shots,
    calibrate_shots_report,
    run_reversible,
    run_reversible_table,
    run_statevector,
    sample,
)

from conftest import random_circuit, unitary


def circuit(num_qubits, *gates):
    return Circuit(num_qubits=num_qubits, gates=tuple(gates))


class TestRunReversible:
    def test_qubit_zero_is_high_bit(self):
        assert run_reversible(circuit(2, x(0)), 0) == 0b10

    def test_positive_control(self):
        cx = circuit(2, x(1, (0,)))
        assert run_reversible(cx, 0b00) == 0b00
        assert run_reversible(cx, 0b10) == 0b11

    def test_negative_control(self):
        gate = Gate("x", (1,), ((0, False),))
        circ = circuit(2, gate)
        assert run_reversible(circ, 0b00) == 0b01
        assert run_reversible(circ, 0b10) == 0b10

    def test_gates_apply_in_order(self):
        circ = circuit(2, x(0), x(1, (0,)))
        assert run_reversible(circ, 0b00) == 0b11

    def test_non_classical_gate_rejected(self):
        with pytest.raises(NonClassicalGate):
            run_reversible(circuit(1, h(0)), 0)

    def test_word_out_of_range(self):
        with pytest.raises(ValueError):
            run_reversible(circuit(2, x(0)), 4)

    def test_table_matches_scalar(self, rng):
        circ = random_circuit(rng, 4, 15, kinds=("x",), max_controls=3)
        full = run_reversible_table(circ)
        assert full == [run_reversible(circ, w) for w in range(16)]

    def test_table_subset(self):
        circ = circuit(2, x(1, (0,)))
        assert run_reversible_table(circ, [0b10, 0b00]) == [0b11, 0b00]


class TestRunStatevector:
    def test_initial_basis_state(self):
        state = run_statevector(circuit(2), initial=0b10)
        assert state.amplitudes[2] == 1.0

    def test_hadamard_uniform(self):
        state = run_statevector(circuit(3, h(0), h(1), h(2)))
        np.testing.assert_allclose(state.probabilities(), [1 / 8] * 8, atol=1e-12)

    def test_bell_pair(self):
        state = run_statevector(circuit(2, h(0), x(1, (0,))))
        np.testing.assert_allclose(state.probabilities(), [0.5, 0, 0, 0.5],
                                   atol=1e-12)

    def test_negative_control_fires_on_zero(self):
        gate = Gate("h", (1,), ((0, False),))
        state = run_statevector(circuit(2, gate), initial=0)
        np.testing.assert_allclose(state.probabilities(), [0.5, 0.5, 0, 0],
                                   atol=1e-12)

    def test_measure_gates_are_inert(self):
        circ = circuit(2, h(0), Gate("measure", (0, 1)))
        state = run_statevector(circ)
        np.testing.assert_allclose(state.probabilities(), [0.5, 0, 0.5, 0],
                                   atol=1e-12)

    def test_matches_unitary_columns(self, rng):
        circ = random_circuit(rng, 3, 10)
        mat = unitary(circ)
        for i in range(8):
            state = run_statevector(circ, initial=i)
            np.testing.assert_allclose(state.amplitudes, mat[:, i], atol=1e-12)

    def test_width_cap(self):
        with pytest.raises(TooManyQubits):
            run_statevector(circuit(MAX_STATEVECTOR_QUBITS + 1))

    def test_initial_out_of_range(self):
        with pytest.raises(ValueError):
            run_statevector(circuit(1), initial=2)


class TestDistribution:
    def test_marginal_single_qubit(self):
        state = run_statevector(circuit(2, h(0)))
        np.testing.assert_allclose(state.distribution(qubits=(0,)), [0.5, 0.5],
                                   atol=1e-12)
        np.testing.assert_allclose(state.distribution(qubits=(1,)), [1.0, 0.0],
                                   atol=1e-12)

    def test_qubit_order_transposes(self):
        # qubit 0 stays |0>, qubit 1 becomes |1>
        state = run_statevector(circuit(2, x(1)))
        np.testing.assert_allclose(state.distribution(qubits=(0, 1)), [0, 1, 0, 0],
                                   atol=1e-12)
        np.testing.assert_allclose(state.distribution(qubits=(1, 0)), [0, 0, 1, 0],
                                   atol=1e-12)

    def test_default_is_full(self):
        state = run_statevector(circuit(2, h(1)))
        np.testing.assert_allclose(state.distribution(),
                                   state.probabilities(), atol=1e-12)


class TestCountHistogram:
    def hist(self):
        return CountHistogram(counts={"10": 6, "01": 4}, shots=10, num_bits=2)

    def test_probability(self):
        assert self.hist().probability("10") == 0.6
        assert self.hist().probability("11") == 0.0

    def test_empirical_indexing(self):
        np.testing.assert_allclose(self.hist().empirical(), [0, 0.4, 0.6, 0])

    def test_json_round_trip(self):
        payload = json.loads(self.hist().to_json())
        assert payload == {"shots": 10, "num_bits": 2,
                           "counts": {"10": 6, "01": 4}}

    def test_csv_sorted(self):
        assert self.hist().to_csv() == "bitstring,count\n01,4\n10,6\n"

    def test_seed_not_part_of_equality(self):
        a = CountHistogram(counts={"0": 1}, shots=1, num_bits=1, seed=1)
        b = CountHistogram(counts={"0": 1}, shots=1, num_bits=1, seed=2)
        assert a == b


class TestSample:
    def test_seed_reproducible(self):
        first = sample([0.25, 0.75], 500, seed=7)
        second = sample([0.25, 0.75], 500, seed=7)
        assert first == second
        assert sample([0.25, 0.75], 500, seed=8) != first

    def test_counts_sum_to_shots(self):
        hist = sample([0.1, 0.2, 0.3, 0.4], 1000, seed=0)
        assert sum(hist.counts.values()) == 1000
        assert hist.num_bits == 2
        assert all(len(bits) == 2 for bits in hist.counts)

    def test_shots_positive(self):
        with pytest.raises(ValueError):
            sample([1.0], 0)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError, match="sums to"):
            sample([0.5, 0.4], 10)

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError, match="power of two"):
            sample([0.5, 0.25, 0.25], 10)

    def test_pmf_and_statevector_sources(self):
        pmf = Pmf(probs=(0.5, 0.5))
        assert sample(pmf, 100, seed=3) == sample([0.5, 0.5], 100, seed=3)
        state = run_statevector(circuit(1, h(0)))
        hist = sample(state, 100, seed=3)
        assert hist.num_bits == 1

    def test_deterministic_circuit(self):
        hist = sample(circuit(2, x(0)), 50, seed=1)
        assert hist.counts == {"10": 50}

    def test_measured_qubits_select_and_order(self):
        circ = circuit(3, x(2), Gate("measure", (2, 0)))
        hist = sample(circ, 20, seed=0)
        # qubit 2 reads 1 and comes first, qubit 0 reads 0
        assert hist.counts == {"10": 20}
        assert hist.num_bits == 2


class TestCalibration:
    def test_recommendation_is_margin_times_first_pass(self):
        pmf = Pmf(probs=(0.25,) * 4)
        report = calibrate_shots_report(pmf, seed=0)
        assert report.shots == math.ceil(1.5 * report.calibrated_at)
        assert report.calibrated_at % 1000 == 0
        assert report.g < report.threshold
        assert 0.0 <= report.p <= 1.0

    def test_seed_pinned(self):
        pmf = Pmf(probs=(0.125,) * 8)
        assert calibrate_shots(pmf, seed=0) == calibrate_shots(pmf, seed=0)

    def test_matches_report(self):
        pmf = Pmf(probs=(0.5, 0.25, 0.125, 0.125))
        assert calibrate_shots(pmf, seed=2) == calibrate_shots_report(pmf, seed=2).shots

    def test_circuit_source(self):
        circ = circuit(1, h(0))
        pmf = Pmf(probs=(0.5, 0.5))
        shots = calibrate_shots(pmf, circuit=circ, seed=0)
        assert shots % 1500 == 0
        doublings = shots // 1500
        assert doublings & (doublings - 1) == 0

    def test_non_convergent(self):
        pmf = Pmf(probs=(0.5, 0.5))
        with pytest.raises(NonConvergent):
            calibrate_shots(pmf, threshold=1e-15, cap=8000)

    def test_tighter_threshold_needs_more_shots(self):
        pmf = Pmf(probs=(0.25,) * 4)
        loose = calibrate_shots_report(pmf, threshold=1e-2, seed=0)
        tight = calibrate_shots_report(pmf, threshold=1e-4, seed=0)
        assert tight.calibrated_at >= loose.calibrated_at

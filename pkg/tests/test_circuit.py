"""Gate and circuit containers, metrics, negative-control lowering."""

import numpy as np
import pytest

from qsynth.circuit import (
    Circuit,
    Gate,
    complexity,
    depth,
    h,
    lower_negative_controls,
    measure,
    metrics,
    rx,
    ry,
    rz,
    x,
)

from conftest import random_circuit, unitary


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("warp", (0,))
    with pytest.raises(ValueError):
        Gate("x", ())
    with pytest.raises(ValueError):
        Gate("x", (0,), ((0, True),))       # control overlaps target
    with pytest.raises(ValueError):
        Gate("x", (0,), ((1, True), (1, False)))
    with pytest.raises(ValueError):
        Gate("rx", (0,))                    # missing angle
    with pytest.raises(ValueError):
        Gate("x", (0,), angle=1.0)          # angle on a fixed gate
    with pytest.raises(ValueError):
        Gate("measure", (0,), ((1, True),))
    with pytest.raises(ValueError):
        Gate("h", (0, 1))


def test_helpers_build_expected_gates():
    g = x(2, ((0, True), (1, False)))
    assert g.kind == "x"
    assert g.targets == (2,)
    assert g.controls == ((0, True), (1, False))
    assert rx(0.5, 1).angle == 0.5
    assert measure(0, 2).targets == (0, 2)


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit(num_qubits=0)
    with pytest.raises(ValueError):
        Circuit(num_qubits=1, gates=(x(1),))
    with pytest.raises(ValueError):
        Circuit(num_qubits=2, gates=(), labels=("a",))


def test_measured_qubits_in_order():
    circ = Circuit(num_qubits=3, gates=(h(1), measure(2, 0), measure(1)))
    assert circ.measured_qubits() == (2, 0, 1)


def test_metrics_counts():
    circ = Circuit(num_qubits=3, gates=(
        x(0), x(2, ((0, True), (1, True))), rx(0.3, 1), measure(0)))
    m = metrics(circ)
    assert m.qubits == 3
    assert m.gate_count == 4
    # costs: 1 + 3 + 1 + 1
    assert m.complexity == 6
    assert m.parameterized_gate_count == 1
    assert m.as_dict()["complexity"] == 6


def test_complexity_sums_controls_plus_targets():
    circ = Circuit(num_qubits=4, gates=(
        x(3, ((0, True), (1, False), (2, True))),))
    assert complexity(circ) == 4


def test_depth_parallel_gates_share_a_layer():
    circ = Circuit(num_qubits=4, gates=(x(0), x(1), x(2), x(3)))
    assert depth(circ) == 1


def test_depth_chains_on_shared_qubits():
    circ = Circuit(num_qubits=3, gates=(
        x(0), x(1, ((0, True),)), x(2, ((1, True),)), x(2)))
    assert depth(circ) == 4


def test_depth_empty():
    assert depth(Circuit(num_qubits=2)) == 0


def test_lower_negative_controls_removes_them(rng):
    for _ in range(10):
        circ = random_circuit(rng, 4, 12)
        low = lower_negative_controls(circ)
        assert all(pos for g in low.gates for _, pos in g.controls)


def test_lower_negative_controls_preserves_unitary(rng):
    for _ in range(10):
        circ = random_circuit(rng, 3, 10)
        low = lower_negative_controls(circ)
        assert np.allclose(unitary(circ), unitary(low), atol=1e-12)


def test_lower_negative_controls_positive_only_is_identity():
    circ = Circuit(num_qubits=2, gates=(x(1, ((0, True),)), h(0)))
    assert lower_negative_controls(circ) is circ


def test_extend_returns_new_circuit():
    base = Circuit(num_qubits=2, gates=(h(0),))
    longer = base.extend([x(1)])
    assert base.gate_count == 1
    assert longer.gate_count == 2
    assert longer.gates[0] == base.gates[0]

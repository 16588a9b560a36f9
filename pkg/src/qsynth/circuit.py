"""Technology-independent circuit representation.

A circuit is an ordered, immutable list of gates over a fixed number of
qubits.  Gates carry an optional set of controls; each control is a
(qubit, positive) pair, where a negative control fires on |0> and is
equivalent to sandwiching the gate between X gates on that qubit.
Rotation kinds carry an angle in radians; no other kind does.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

ROTATION_KINDS = frozenset({"rx", "ry", "rz"})
GATE_KINDS = frozenset({"x", "h", "z", "cz", "rx", "ry", "rz", "sx", "sxdg", "measure"})


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[tuple[int, bool], ...] = ()
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not self.targets:
            raise ValueError("gate needs at least one target")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("repeated target qubit")
        control_qubits = [q for q, _ in self.controls]
        if len(set(control_qubits)) != len(control_qubits):
            raise ValueError("repeated control qubit")
        if set(control_qubits) & set(self.targets):
            raise ValueError("control and target qubits overlap")
        if self.kind in ROTATION_KINDS:
            if self.angle is None:
                raise ValueError(f"{self.kind} needs an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} does not take an angle")
        if self.kind == "measure":
            if self.controls:
                raise ValueError("measurement cannot be controlled")
        elif len(self.targets) != 1:
            raise ValueError(f"{self.kind} takes exactly one target")

    @property
    def qubits(self) -> tuple[int, ...]:
        """Every qubit the gate touches, controls first."""
        return tuple(q for q, _ in self.controls) + self.targets

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    @property
    def parameterized(self) -> bool:
        return self.angle is not None

    def cost(self) -> int:
        """Control count plus target count."""
        return len(self.controls) + len(self.targets)


def _coerce_controls(controls) -> tuple[tuple[int, bool], ...]:
    out = []
    for c in controls:
        if isinstance(c, tuple):
            q, positive = c
            out.append((int(q), bool(positive)))
        else:
            out.append((int(c), True))
    return tuple(out)


def x(target: int, controls=()) -> Gate:
    return Gate("x", (target,), _coerce_controls(controls))


def h(target: int) -> Gate:
    return Gate("h", (target,))


def z(target: int, controls=()) -> Gate:
    return Gate("z", (target,), _coerce_controls(controls))


def cz(control: int, target: int) -> Gate:
    return Gate("cz", (target,), ((control, True),))


def rx(angle: float, target: int, controls=()) -> Gate:
    return Gate("rx", (target,), _coerce_controls(controls), float(angle))


def ry(angle: float, target: int, controls=()) -> Gate:
    return Gate("ry", (target,), _coerce_controls(controls), float(angle))


def rz(angle: float, target: int, controls=()) -> Gate:
    return Gate("rz", (target,), _coerce_controls(controls), float(angle))


def sx(target: int, controls=()) -> Gate:
    return Gate("sx", (target,), _coerce_controls(controls))


def sxdg(target: int, controls=()) -> Gate:
    return Gate("sxdg", (target,), _coerce_controls(controls))


def measure(*targets: int) -> Gate:
    return Gate("measure", tuple(targets))


@dataclass(frozen=True)
class Circuit:
    """An immutable gate list over num_qubits qubits."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.num_qubits <= 0:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate touches qubit {q} outside 0..{self.num_qubits - 1}")
        if self.labels and len(self.labels) != self.num_qubits:
            raise ValueError("labels must name every qubit")

    def __len__(self) -> int:
        return len(self.gates)

    def extend(self, gates) -> "Circuit":
        return replace(self, gates=self.gates + tuple(gates))

    def measured_qubits(self) -> tuple[int, ...]:
        out: list[int] = []
        for g in self.gates:
            if g.kind == "measure":
                out.extend(g.targets)
        return tuple(out)

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    @property
    def parameterized_gate_count(self) -> int:
        return sum(1 for g in self.gates if g.parameterized)


def complexity(circuit: Circuit) -> int:
    """Sum over gates of (controls + targets)."""
    return sum(g.cost() for g in circuit.gates)


def depth(circuit: Circuit) -> int:
    """Longest chain of gates that pairwise share a qubit.

    Two gates conflict iff they touch any common qubit (controls count,
    and so do measurements).
    """
    level = [0] * circuit.num_qubits
    best = 0
    for g in circuit.gates:
        qs = g.qubits
        d = 1 + max(level[q] for q in qs)
        for q in qs:
            level[q] = d
        best = max(best, d)
    return best


@dataclass(frozen=True)
class Metrics:
    qubits: int
    gate_count: int
    complexity: int
    depth: int
    parameterized_gate_count: int

    def as_dict(self) -> dict[str, int]:
        return {
            "qubits": self.qubits,
            "gate_count": self.gate_count,
            "complexity": self.complexity,
            "depth": self.depth,
            "parameterized_gate_count": self.parameterized_gate_count,
        }


def metrics(circuit: Circuit) -> Metrics:
    return Metrics(
        qubits=circuit.num_qubits,
        gate_count=circuit.gate_count,
        complexity=complexity(circuit),
        depth=depth(circuit),
        parameterized_gate_count=circuit.parameterized_gate_count,
    )


def lower_negative_controls(circuit: Circuit) -> Circuit:
    """Rewrite negative controls as X-conjugated positive controls.

    Idempotent: a circuit with only positive controls comes back unchanged
    (same object).
    """
    if all(pos for g in circuit.gates for _, pos in g.controls):
        return circuit
    gates: list[Gate] = []
    for g in circuit.gates:
        negatives = [q for q, pos in g.controls if not pos]
        if not negatives:
            gates.append(g)
            continue
        for q in negatives:
            gates.append(x(q))
        gates.append(replace(g, controls=tuple((q, True) for q, _ in g.controls)))
        for q in reversed(negatives):
            gates.append(x(q))
    return replace(circuit, gates=tuple(gates))

"""Post-synthesis circuit passes.

Every pass here preserves the circuit unitary (symmetric_optimize
preserves the output distribution); none of them knows anything about
hardware.  Pass order matters: the control-count reducers expect the
shapes their upstream synthesizers produce.
"""

from __future__ import annotations

import math

from .circuit import (
    ROTATION_KINDS,
    Circuit,
    Gate,
    cz,
    h,
    lower_negative_controls,
    rx,
    ry,
    rz,
    x,
)
from .encoding import angle_tree, synth_amplitude
from .errors import NoSymmetry, PatternIncomplete
from .funcprep import Pmf

SYMMETRY_TOLERANCE = 1e-12


# ---------------------------------------------------------------------------
# double-X removal
# ---------------------------------------------------------------------------

def remove_double_x(circuit: Circuit) -> Circuit:
    """Delete adjacent self-cancelling X pairs, repeating to fixpoint.

    Only bare (uncontrolled) X gates are touched, and only when no gate
    between the two members acts on that qubit.
    """
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        out: list[Gate] = []
        # open[q] = index in `out` of an unmatched bare X on qubit q
        open_x: dict[int, int] = {}
        for gate in gates:
            if gate.kind == "x" and not gate.controls:
                q = gate.targets[0]
                if q in open_x:
                    out[open_x.pop(q)] = None
                    changed = True
                    continue
                open_x[q] = len(out)
                out.append(gate)
                continue
            for q in gate.qubits:
                open_x.pop(q, None)
            out.append(gate)
        gates = [g for g in out if g is not None]
    return Circuit(num_qubits=circuit.num_qubits, gates=tuple(gates),
                   labels=circuit.labels)


# ---------------------------------------------------------------------------
# Toffoli decompositions
# ---------------------------------------------------------------------------

def _ladder(gate: Gate, first_ancilla: int) -> list[Gate]:
    """Replace a many-controlled X by a Toffoli chain onto fresh ancillas.

    With controls c1..ck the chain computes c1*c2 -> a1, c3*a1 -> a2, ...
    onto k-1 ancillas, copies the last ancilla onto the target, then
    uncomputes; original control polarities ride on the chain Toffolis.
    """
    controls = list(gate.controls)
    k = len(controls)
    a = first_ancilla
    compute = [Gate("x", (a,), (controls[0], controls[1]))]
    for i in range(2, k):
        compute.append(Gate("x", (a + i - 1,), (controls[i], (a + i - 2, True))))
    middle = Gate(gate.kind, gate.targets, ((a + k - 2, True),), gate.angle)
    return compute + [middle] + list(reversed(compute))


def _five_gate(gate: Gate) -> list[Gate]:
    """Exact five-gate form of a positive-control Toffoli (V = sqrt of X)."""
    (a, _), (b, _) = gate.controls
    t = gate.targets[0]
    return [
        Gate("sx", (t,), ((b, True),)),
        Gate("x", (b,), ((a, True),)),
        Gate("sxdg", (t,), ((b, True),)),
        Gate("x", (b,), ((a, True),)),
        Gate("sx", (t,), ((a, True),)),
    ]


def decompose_mcx(circuit: Circuit, mode: str) -> Circuit:
    """Reduce control counts of X gates.

    ``to_true_toffoli`` rewrites every X with three or more controls as a
    chain of two-control Toffolis over freshly appended shared ancillas
    (all returned to 0).  ``toffoli_to_5gate`` rewrites every two-control
    X as two CX plus two controlled square-root-of-X and one controlled
    inverse square root; negative controls are X-conjugated away first.
    """
    if mode == "to_true_toffoli":
        widths = [g.num_controls for g in circuit.gates
                  if g.kind == "x" and g.num_controls >= 3]
        extra = max(widths) - 1 if widths else 0
        base = circuit.num_qubits
        out: list[Gate] = []
        for gate in circuit.gates:
            if gate.kind == "x" and gate.num_controls >= 3:
                out.extend(_ladder(gate, base))
            else:
                out.append(gate)
        labels = circuit.labels
        if labels and extra:
            labels = labels + tuple(f"anc{i}" for i in range(extra))
        return Circuit(num_qubits=base + extra, gates=tuple(out), labels=labels)
    if mode == "toffoli_to_5gate":
        out = []
        for gate in circuit.gates:
            if gate.kind == "x" and gate.num_controls == 2:
                negatives = [q for q, pol in gate.controls if not pol]
                if negatives:
                    flips = [x(q) for q in negatives]
                    positive = Gate("x", gate.targets,
                                    tuple((q, True) for q, _ in gate.controls))
                    out.extend(flips)
                    out.extend(_five_gate(positive))
                    out.extend(reversed(flips))
                else:
                    out.extend(_five_gate(gate))
            else:
                out.append(gate)
        return Circuit(num_qubits=circuit.num_qubits, gates=tuple(out),
                       labels=circuit.labels)
    raise ValueError(f"unknown decomposition mode {mode!r}")


# ---------------------------------------------------------------------------
# Gray-code rewrite of uniformly controlled rotations
# ---------------------------------------------------------------------------

def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _entangler(kind: str, control: int, target: int) -> Gate:
    # Z-conjugation flips RX and RY signs; X-conjugation flips RZ.
    if kind == "rx":
        return cz(control, target)
    return x(target, (control,))


def _rewrite_run(run: list[Gate], strict: bool) -> list[Gate]:
    kind = run[0].kind
    target = run[0].targets[0]
    controls = sorted(q for q, _ in run[0].controls)
    k = len(controls)
    # pattern bit j corresponds to controls[j]
    thetas = [0.0] * (1 << k)
    seen = set()
    for gate in run:
        pattern = 0
        for j, q in enumerate(controls):
            if dict(gate.controls)[q]:
                pattern |= 1 << j
        seen.add(pattern)
        thetas[pattern] += gate.angle
    if strict and len(seen) != 1 << k:
        raise PatternIncomplete(
            f"run covers {len(seen)} of {1 << k} control patterns"
        )
    size = 1 << k
    alphas = []
    for i in range(size):
        g = _gray(i)
        s = math.fsum(
            (-1 if (b & g).bit_count() & 1 else 1) * thetas[b] for b in range(size)
        )
        alphas.append(s / size)
    out: list[Gate] = []
    for i in range(size):
        if alphas[i] != 0.0:
            out.append(Gate(kind, (target,), (), alphas[i]))
        diff = _gray(i) ^ _gray((i + 1) % size)
        out.append(_entangler(kind, controls[diff.bit_length() - 1], target))
    # adjacent identical entanglers cancel once zero rotations are gone
    cancelled: list[Gate] = []
    for gate in out:
        if cancelled and cancelled[-1] == gate and gate.kind in ("cz", "x"):
            cancelled.pop()
        else:
            cancelled.append(gate)
    return cancelled


def graycode_optimize(circuit: Circuit, strict: bool = False) -> Circuit:
    """Flatten uniformly controlled rotation runs to single-control form.

    A run is a maximal stretch of consecutive rotations of one kind on
    one target whose gates all control on the same qubit set.  Each run
    is replaced by plain rotations interleaved with entanglers along a
    Gray sequence; the new angles solve the sign system tying per-pattern
    angles to path contributions.  Runs that do not cover every control
    pattern are padded with zero angles (``strict=True`` raises
    PatternIncomplete instead); zero-angle outputs are pruned.  Gates
    that are not controlled rotations pass through untouched.
    """
    out: list[Gate] = []
    run: list[Gate] = []

    def flush() -> None:
        if not run:
            return
        if run[0].controls:
            out.extend(_rewrite_run(run, strict))
        else:
            out.extend(run)
        run.clear()

    for gate in circuit.gates:
        if gate.kind in ROTATION_KINDS:
            if run and (
                gate.kind != run[0].kind
                or gate.targets != run[0].targets
                or sorted(q for q, _ in gate.controls)
                != sorted(q for q, _ in run[0].controls)
            ):
                flush()
            run.append(gate)
        else:
            flush()
            out.append(gate)
    flush()
    return Circuit(num_qubits=circuit.num_qubits, gates=tuple(out),
                   labels=circuit.labels)


# ---------------------------------------------------------------------------
# symmetric distributions
# ---------------------------------------------------------------------------

def _shift(gate: Gate, offset: int) -> Gate:
    return Gate(
        gate.kind,
        tuple(t + offset for t in gate.targets),
        tuple((q + offset, pol) for q, pol in gate.controls),
        gate.angle,
    )


def symmetric_optimize(pmf_or_tree, kind: str) -> Circuit:
    """Prepare a symmetric distribution with a shared half-size subtree.

    ``duplicate`` requires the first and second halves of the PMF to be
    equal: the branching qubit gets a plain H and the halved distribution
    is prepared once, uncontrolled.  ``mirror`` requires bin i to equal
    bin (last - i): after the same H and shared preparation, a CX fans
    the branching qubit onto every lower qubit, reflecting the second
    half out of the first.  Raises NoSymmetry when the required relation
    fails.
    """
    if isinstance(pmf_or_tree, Pmf):
        probs = tuple(pmf_or_tree)
    else:
        probs = tuple(pmf_or_tree.leaf_probs)
    size = len(probs)
    nq = (size - 1).bit_length()
    half = size // 2
    if kind == "duplicate":
        mismatch = any(
            abs(probs[i] - probs[half + i]) > SYMMETRY_TOLERANCE for i in range(half)
        )
    elif kind == "mirror":
        mismatch = any(
            abs(probs[i] - probs[size - 1 - i]) > SYMMETRY_TOLERANCE
            for i in range(half)
        )
    else:
        raise ValueError(f"unknown symmetry kind {kind!r}")
    if mismatch or size < 2:
        raise NoSymmetry(f"bins lack the {kind} symmetry")

    gates: list[Gate] = [h(0)]
    if half > 1:
        shared = Pmf(probs=tuple(2.0 * p for p in probs[:half]))
        sub = synth_amplitude(shared)
        gates.extend(_shift(g, 1) for g in sub.gates)
    if kind == "mirror":
        gates.extend(x(q, (0,)) for q in range(1, nq))
    return Circuit(num_qubits=nq, gates=tuple(gates))


# ---------------------------------------------------------------------------
# full lowering to a uniform gate vocabulary
# ---------------------------------------------------------------------------

_T = math.pi / 4


def _toffoli_body(a: int, b: int, t: int) -> list[Gate]:
    """Positive-control Toffoli over {h, cx, rz}, exact up to global phase."""
    return [
        h(t), x(t, (b,)), rz(-_T, t), x(t, (a,)), rz(_T, t),
        x(t, (b,)), rz(-_T, t), x(t, (a,)), rz(_T, b), rz(_T, t),
        h(t), x(b, (a,)), rz(_T, a), rz(-_T, b), x(b, (a,)),
    ]


def _single_control_abc(gate: Gate) -> list[Gate]:
    """One positive control, any non-X kind, over {h, cx, rx, ry, rz}."""
    (c, _), = gate.controls
    t = gate.targets[0]
    kind = gate.kind
    if kind == "rz":
        return [rz(gate.angle / 2, t), x(t, (c,)), rz(-gate.angle / 2, t), x(t, (c,))]
    if kind == "ry":
        return [ry(gate.angle / 2, t), x(t, (c,)), ry(-gate.angle / 2, t), x(t, (c,))]
    if kind == "rx":
        return [h(t)] + _single_control_abc(rz(gate.angle, t, (c,))) + [h(t)]
    if kind in ("z", "cz"):
        return [h(t), x(t, (c,)), h(t)]
    if kind == "sx":
        return [rz(_T, c)] + _single_control_abc(rx(math.pi / 2, t, (c,)))
    if kind == "sxdg":
        return [rz(-_T, c)] + _single_control_abc(rx(-math.pi / 2, t, (c,)))
    if kind == "h":
        # H = RY(pi/4) Z RY(-pi/4); the list applies the rightmost factor first
        return (
            [ry(-math.pi / 4, t)]
            + _single_control_abc(Gate("z", (t,), ((c, True),)))
            + [ry(math.pi / 4, t)]
        )
    raise ValueError(f"cannot lower controlled {kind!r}")


def _bare_translation(gate: Gate) -> list[Gate]:
    kind = gate.kind
    t = gate.targets[0]
    if kind == "z":
        return [rz(math.pi, t)]
    if kind == "sx":
        return [rx(math.pi / 2, t)]
    if kind == "sxdg":
        return [rx(-math.pi / 2, t)]
    return [gate]


UNIFORM_KINDS = frozenset({"rx", "ry", "rz", "x", "h", "measure"})


def lower_to_uniform(circuit: Circuit) -> Circuit:
    """Rewrite to {rx, ry, rz, cx, x, h, measure}, up to global phase.

    Negative controls are X-conjugated away, many-controlled gates go
    through the Toffoli chain (with shared appended ancillas), Toffolis
    become the standard CX/RZ/H block, remaining single-controlled gates
    are conjugated down to controlled-RZ form, and leftover exotic bare
    gates are translated to rotations.
    """
    work = lower_negative_controls(circuit)
    widths = [g.num_controls for g in work.gates if g.num_controls >= 2]
    extra = (max(widths) - 1) if widths else 0
    base = work.num_qubits

    staged: list[Gate] = []
    for gate in work.gates:
        if gate.num_controls >= 2:
            if gate.kind == "x" and gate.num_controls == 2:
                staged.append(gate)
            else:
                staged.extend(_ladder(gate, base))
        else:
            staged.append(gate)

    lowered: list[Gate] = []
    for gate in staged:
        if gate.kind == "x" and gate.num_controls == 2:
            (a, _), (b, _) = gate.controls
            lowered.extend(_toffoli_body(a, b, gate.targets[0]))
        else:
            lowered.append(gate)

    out: list[Gate] = []
    for gate in lowered:
        if gate.num_controls == 1 and gate.kind != "x":
            out.extend(_single_control_abc(gate))
        elif gate.num_controls == 0:
            out.extend(_bare_translation(gate))
        else:
            out.append(gate)

    labels = circuit.labels
    if labels and extra:
        labels = labels + tuple(f"anc{i}" for i in range(extra))
    return Circuit(num_qubits=base + extra, gates=tuple(out), labels=labels)


PASSES = {
    "double-x": remove_double_x,
    "mcx-ladder": lambda c: decompose_mcx(c, "to_true_toffoli"),
    "toffoli-5": lambda c: decompose_mcx(c, "toffoli_to_5gate"),
    "graycode": graycode_optimize,
}


def apply_passes(circuit: Circuit, names) -> Circuit:
    """Run named circuit passes in order (CLI flag spellings)."""
    for name in names:
        try:
            step = PASSES[name]
        except KeyError:
            raise ValueError(f"unknown pass {name!r}") from None
        circuit = step(circuit)
    return circuit

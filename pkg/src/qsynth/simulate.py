"""Built-in verification backends.

Two execution models cover everything the synthesizers emit:

* reversible propagation of basis states through X-family gates, for
  checking classical circuits on full truth tables, and
* dense statevector simulation (capped at 20 qubits) for everything with
  rotations, Hadamards, or phases.

Sampling is a separate, seeded step so every histogram in reports and
tests is reproducible.  The generator is numpy's default PCG64, which is
stable across platforms for a fixed seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit
from .errors import NonClassicalGate, NonConvergent, TooManyQubits
from .funcprep import Pmf

MAX_STATEVECTOR_QUBITS = 20
CALIBRATION_CAP = 1 << 26

_SQ2 = 1.0 / math.sqrt(2.0)
_MATRICES = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "cz": np.array([[1, 0], [0, -1]], dtype=complex),
    "sx": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
    "sxdg": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex) / 2,
}


def _gate_matrix(gate) -> np.ndarray:
    if gate.kind in _MATRICES:
        return _MATRICES[gate.kind]
    t = gate.angle / 2.0
    if gate.kind == "rx":
        return np.array([[math.cos(t), -1j * math.sin(t)], [-1j * math.sin(t), math.cos(t)]])
    if gate.kind == "ry":
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], dtype=complex)
    if gate.kind == "rz":
        return np.array([[np.exp(-1j * t), 0], [0, np.exp(1j * t)]])
    raise ValueError(f"no matrix for gate kind {gate.kind!r}")


@dataclass(eq=False)
class Statevector:
    """Dense amplitudes; basis index bit (n-1-q) holds qubit q.

    Equivalently, writing an index as an n-character bitstring puts qubit 0
    leftmost, matching how table words are written.
    """

    amplitudes: np.ndarray
    num_qubits: int

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def distribution(self, qubits=None) -> np.ndarray:
        """Measurement distribution over the given qubits (default: all)."""
        probs = self.probabilities().reshape((2,) * self.num_qubits)
        if qubits is None:
            return probs.reshape(-1)
        keep = list(qubits)
        drop = tuple(q for q in range(self.num_qubits) if q not in keep)
        marginal = probs.sum(axis=drop) if drop else probs
        # axes of `marginal` follow ascending qubit index; reorder as asked
        order = [sorted(keep).index(q) for q in keep]
        return np.transpose(marginal, order).reshape(-1)


def run_reversible(circuit: Circuit, word: int) -> int:
    """Propagate a basis state through an X-family circuit.

    Only (multi-)controlled X gates are allowed; anything else raises
    NonClassicalGate.  The input and result use the table word convention
    (qubit 0 is the most significant bit).
    """
    n = circuit.num_qubits
    if not 0 <= word < (1 << n):
        raise ValueError(f"input {word} does not fit in {n} bits")
    state = word
    for g in circuit.gates:
        if g.kind != "x":
            raise NonClassicalGate(f"{g.kind} gate has no classical action")
        fire = True
        for q, positive in g.controls:
            bit = (state >> (n - 1 - q)) & 1
            if bit != int(positive):
                fire = False
                break
        if fire:
            state ^= 1 << (n - 1 - g.targets[0])
    return state


def run_reversible_table(circuit: Circuit, words=None) -> list[int]:
    """Vectorized run_reversible over many words (default: the full domain)."""
    n = circuit.num_qubits
    if words is None:
        state = np.arange(1 << n, dtype=np.int64)
    else:
        state = np.asarray(list(words), dtype=np.int64)
    for g in circuit.gates:
        if g.kind != "x":
            raise NonClassicalGate(f"{g.kind} gate has no classical action")
        fire = np.ones(len(state), dtype=bool)
        for q, positive in g.controls:
            bit = (state >> (n - 1 - q)) & 1
            fire &= bit == int(positive)
        state[fire] ^= 1 << (n - 1 - g.targets[0])
    return state.tolist()


def run_statevector(circuit: Circuit, initial: int = 0) -> Statevector:
    """Apply the circuit to |initial> exactly.

    Measurement gates leave the state untouched here; use sample() to draw
    outcomes.  Refuses circuits wider than MAX_STATEVECTOR_QUBITS.
    """
    n = circuit.num_qubits
    if n > MAX_STATEVECTOR_QUBITS:
        raise TooManyQubits(f"{n} qubits exceeds the dense-simulation cap of {MAX_STATEVECTOR_QUBITS}")
    if not 0 <= initial < (1 << n):
        raise ValueError(f"initial state {initial} does not fit in {n} bits")
    state = np.zeros(1 << n, dtype=complex)
    state[initial] = 1.0
    state = state.reshape((2,) * n)

    for g in circuit.gates:
        if g.kind == "measure":
            continue
        mat = _gate_matrix(g)
        index: list = [slice(None)] * n
        for q, positive in g.controls:
            index[q] = 1 if positive else 0
        target = g.targets[0]
        axis = target - sum(1 for q, _ in g.controls if q < target)
        view = state[tuple(index)]
        moved = np.moveaxis(view, axis, 0)
        updated = (mat @ moved.reshape(2, -1)).reshape(moved.shape)
        moved[...] = updated

    return Statevector(amplitudes=state.reshape(-1), num_qubits=n)


@dataclass
class CountHistogram:
    """Counts per measured bitstring."""

    counts: dict[str, int]
    shots: int
    num_bits: int
    seed: int | None = field(default=None, compare=False)

    def probability(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots

    def empirical(self) -> np.ndarray:
        """Empirical distribution over all 2**num_bits bins."""
        probs = np.zeros(1 << self.num_bits)
        for bits, count in self.counts.items():
            probs[int(bits, 2)] = count / self.shots
        return probs

    def to_json(self) -> str:
        payload = {"shots": self.shots, "num_bits": self.num_bits, "counts": self.counts}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["bitstring,count"]
        lines.extend(f"{bits},{self.counts[bits]}" for bits in sorted(self.counts))
        return "\n".join(lines) + "\n"


def _distribution_of(obj) -> tuple[np.ndarray, int]:
    if isinstance(obj, Circuit):
        sv = run_statevector(obj)
        measured = obj.measured_qubits()
        if measured:
            return sv.distribution(measured), len(measured)
        return sv.probabilities(), obj.num_qubits
    if isinstance(obj, Statevector):
        return obj.probabilities(), obj.num_qubits
    if isinstance(obj, Pmf):
        return np.asarray(obj.probs), obj.num_qubits
    probs = np.asarray(list(obj), dtype=float)
    num_bits = (len(probs) - 1).bit_length()
    if len(probs) != 1 << num_bits:
        raise ValueError("distribution length must be a power of two")
    return probs, num_bits


def sample(obj, shots: int, seed: int | None = None) -> CountHistogram:
    """Draw a multinomial sample from a circuit, state, or distribution.

    Circuits with measurement gates are sampled over the measured qubits in
    measurement order; bare circuits and states over all qubits.  The same
    seed always reproduces the same histogram.
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    probs, num_bits = _distribution_of(obj)
    total = probs.sum()
    if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError(f"distribution sums to {total}, not 1")
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs / total)
    counts = {
        format(i, f"0{num_bits}b"): int(c)
        for i, c in enumerate(draws)
        if c
    }
    return CountHistogram(counts=counts, shots=shots, num_bits=num_bits, seed=seed)


@dataclass(frozen=True)
class CalibrationResult:
    shots: int            # recommended count: 1.5x the first passing count
    calibrated_at: int    # the first tested count that met the threshold
    g: float              # per-shot G statistic at the recommended count
    p: float              # upper-tail chi-square probability of g (1 dof)
    threshold: float


def calibrate_shots(
    pmf: Pmf,
    circuit: Circuit | None = None,
    threshold: float = 1e-3,
    start_shots: int = 1000,
    margin: float = 1.5,
    seed: int = 0,
    cap: int = CALIBRATION_CAP,
) -> int:
    """Find a shot budget that makes sampled histograms track the target.

    Doubles the shot count until the per-shot G statistic of a sampled
    histogram against ``pmf`` drops below ``threshold``, then recommends
    1.5x that count, rounded up.  Raises NonConvergent past ``cap`` shots.
    See calibrate_shots_report for the accompanying similarity numbers.
    """
    return calibrate_shots_report(
        pmf, circuit, threshold=threshold, start_shots=start_shots,
        margin=margin, seed=seed, cap=cap,
    ).shots


def calibrate_shots_report(
    pmf: Pmf,
    circuit: Circuit | None = None,
    threshold: float = 1e-3,
    start_shots: int = 1000,
    margin: float = 1.5,
    seed: int = 0,
    cap: int = CALIBRATION_CAP,
) -> CalibrationResult:
    """calibrate_shots plus the G and similarity values at the result.

    The raw G statistic grows like a chi-square variable with bins-1
    degrees of freedom, so an absolute threshold as small as 1e-3 is only
    meaningful per shot; the loop therefore compares G / shots, which is
    2 * KL(empirical || target).  The reported similarity p is the
    upper-tail chi-square probability (one degree of freedom) of the
    per-shot G measured at the recommended count.
    """
    from .stats import kl_divergence
    from scipy.stats import chi2

    source = circuit if circuit is not None else pmf
    target = np.asarray(pmf.probs)

    shots = start_shots
    attempt = 0
    while True:
        hist = sample(source, shots, seed=seed + attempt)
        g_norm = 2.0 * kl_divergence(hist.empirical(), target)
        if g_norm < threshold:
            break
        shots *= 2
        attempt += 1
        if shots > cap:
            raise NonConvergent(f"no shot count below {cap} met G < {threshold}")

    recommended = math.ceil(margin * shots)
    final = sample(source, recommended, seed=seed + 1000)
    g_final = 2.0 * kl_divergence(final.empirical(), target)
    p_final = float(chi2.sf(g_final, df=1))
    return CalibrationResult(
        shots=recommended, calibrated_at=shots, g=g_final, p=p_final, threshold=threshold,
    )

"""Data-encoding synthesis: basis, angle and amplitude memories.

Basis memories copy each stored word onto a data register under
full-width address controls.  Angle memories rotate a single data qubit:
in plain mode the words at even table positions land in the RX magnitude
(readable as P(data=1) = sin^2 of the stored value) and the words at odd
positions land in the RZ phase (readable only through interference); in
improved mode every address stores a significand via RX and an integer
exponent via RZ.  Amplitude circuits prepare a probability distribution
outright from a binary tree of RY rotations.

A stored value t is realized as RX(2t) / RY(2t) so that measurement
probabilities come out as cos^2/sin^2 of t itself rather than of t/2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, rx, ry, rz
from .errors import (
    DuplicateAddress,
    NotNormalized,
    NotPowerOfTwo,
    ValueOutOfRange,
)
from .funcprep import (
    NormalizedWords,
    Pmf,
    TruthTable,
    assign_dont_cares,
    expand,
    normalize,
    normalize_pmf,
    to_truth_table,
)
from .pla import PlaTable

PMF_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QromSpec:
    """A read-only memory image: distinct addresses mapping to data words.

    Addresses not listed implicitly hold the word 0, which costs no gates
    in any encoding.
    """

    n: int
    m: int
    pairs: tuple[tuple[int, int], ...]
    encoding: str = "basis"

    def __post_init__(self) -> None:
        seen = set()
        for a, x in self.pairs:
            if a in seen:
                raise DuplicateAddress(f"address {a} appears twice")
            seen.add(a)
            if not 0 <= a < (1 << self.n):
                raise ValueError(f"address {a} does not fit in {self.n} bits")
            if not 0 <= x < (1 << self.m):
                raise ValueError(f"word {x} does not fit in {self.m} bits")


def _address_controls(n: int, a: int) -> tuple[tuple[int, bool], ...]:
    return tuple((q, bool((a >> (n - 1 - q)) & 1)) for q in range(n))


def synth_basis(spec: QromSpec) -> Circuit:
    """One multi-controlled X per stored hot bit, full address controls.

    Uses n address plus m data qubits; preparing |a> and measuring the
    data register reads the stored word with probability 1.
    """
    gates = []
    for a, x in spec.pairs:
        controls = _address_controls(spec.n, a)
        for b in range(spec.m - 1, -1, -1):
            if (x >> b) & 1:
                gates.append(Gate("x", (spec.n + spec.m - 1 - b,), controls))
    labels = tuple(f"a{i}" for i in range(spec.n)) + tuple(f"d{i}" for i in range(spec.m))
    return Circuit(num_qubits=spec.n + spec.m, gates=tuple(gates), labels=labels)


def synth_angle(spec: QromSpec, improved: bool = False,
                normalized: NormalizedWords | None = None) -> Circuit:
    """Rotation memory on n address qubits plus one data qubit.

    ``normalized`` supplies one value per pair, in pair order.  Plain
    mode: pairs at even positions store their value as an RX (so
    P(data=1 | that address) = sin^2(value)) and pairs at odd positions
    store theirs as an RZ phase; values must lie in [0, 2*pi).  Improved
    mode needs float-like words and stores, per address, the significand
    as an RX and the integer exponent as an RZ.  Zero-valued words emit
    nothing.
    """
    if normalized is None:
        raise ValueError("synth_angle needs normalized word values")
    if len(normalized.values) != len(spec.pairs):
        raise ValueError(
            f"{len(normalized.values)} values for {len(spec.pairs)} pairs"
        )
    data = spec.n
    gates = []
    if improved:
        if normalized.scheme != "floatlike":
            raise ValueOutOfRange(
                f"improved angle mode needs floatlike words, got {normalized.scheme!r}"
            )
        for j, (a, _) in enumerate(spec.pairs):
            s = normalized.significands[j]
            e = normalized.exponents[j]
            if s == 0.0:
                continue
            controls = _address_controls(spec.n, a)
            gates.append(rx(2.0 * s, data, controls))
            if e:
                gates.append(rz(float(e), data, controls))
    else:
        bad = [v for v in normalized.values if not 0.0 <= v < 2.0 * math.pi]
        if bad:
            raise ValueOutOfRange(f"angle value {bad[0]!r} outside [0, 2*pi)")
        for j, (a, _) in enumerate(spec.pairs):
            v = normalized.values[j]
            if v == 0.0:
                continue
            controls = _address_controls(spec.n, a)
            if j % 2 == 0:
                gates.append(rx(2.0 * v, data, controls))
            else:
                gates.append(rz(v, data, controls))
    labels = tuple(f"a{i}" for i in range(spec.n)) + ("d0",)
    return Circuit(num_qubits=spec.n + 1, gates=tuple(gates), labels=labels)


# ---------------------------------------------------------------------------
# amplitude encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AngleTree:
    """Binary rotation tree behind an amplitude-encoded distribution.

    ``levels[l][i]`` is the angle at node i of depth l (2^l nodes per
    level); at every node cos^2 of the angle equals the left-subtree mass
    over the subtree mass, so multiplying squared cosines (left steps)
    and sines (right steps) down a root-leaf path reproduces that leaf's
    probability.  Zero-mass subtrees carry angle 0.
    """

    num_qubits: int
    levels: tuple[tuple[float, ...], ...]
    leaf_probs: tuple[float, ...]

    def reconstruct(self, leaf: int) -> float:
        """Probability of ``leaf`` from the path angles."""
        p = 1.0
        for level in range(self.num_qubits):
            theta = self.levels[level][leaf >> (self.num_qubits - level)]
            if (leaf >> (self.num_qubits - 1 - level)) & 1:
                p *= math.sin(theta) ** 2
            else:
                p *= math.cos(theta) ** 2
        return p


def angle_tree(pmf: Pmf) -> AngleTree:
    """Build the rotation tree for a PMF (leaves must sum to 1)."""
    probs = tuple(pmf)
    total = math.fsum(probs)
    if abs(total - 1.0) > PMF_TOLERANCE:
        raise NotNormalized(f"bins sum to {total!r}")
    nq = pmf.num_qubits
    masses = [list(probs)]
    while len(masses[-1]) > 1:
        prev = masses[-1]
        masses.append([prev[2 * i] + prev[2 * i + 1] for i in range(len(prev) // 2)])
    masses.reverse()  # masses[l] has 2^l subtree masses at depth l
    levels = []
    for level in range(nq):
        row = []
        for i in range(1 << level):
            subtree = masses[level][i]
            left = masses[level + 1][2 * i]
            if subtree <= 0.0:
                row.append(0.0)
            else:
                ratio = min(1.0, max(0.0, left / subtree))
                row.append(math.acos(math.sqrt(ratio)))
        levels.append(tuple(row))
    return AngleTree(num_qubits=nq, levels=tuple(levels), leaf_probs=probs)


def synth_amplitude(pmf: Pmf, prune: bool = False) -> Circuit:
    """Prepare a distribution with one RY per rotation-tree node.

    Level l contributes 2^l RY gates, each controlled on the l-qubit path
    prefix; the parameter is twice the node angle.  ``prune`` drops the
    zero-angle gates under zero-mass subtrees instead of emitting them.
    """
    tree = angle_tree(pmf)
    nq = tree.num_qubits
    gates = []
    for level in range(nq):
        for i in range(1 << level):
            theta = tree.levels[level][i]
            if prune and theta == 0.0:
                continue
            controls = tuple(
                (q, bool((i >> (level - 1 - q)) & 1)) for q in range(level)
            )
            gates.append(ry(2.0 * theta, level, controls))
    return Circuit(num_qubits=nq, gates=tuple(gates))


# ---------------------------------------------------------------------------
# pipelines and ingestion
# ---------------------------------------------------------------------------

def spec_from_table(table: TruthTable, encoding: str = "basis") -> QromSpec:
    """Memory image of a flat table: one pair per defined address."""
    pairs = tuple(sorted(table.entries.items()))
    return QromSpec(n=table.n, m=table.m, pairs=pairs, encoding=encoding)


def qrom_pipeline(
    table: PlaTable,
    encoding: str = "basis",
    scheme: str | None = None,
    hidden_bit: bool = False,
    strict_halfopen: bool = False,
    max_rows: int | None = None,
) -> Circuit:
    """Cube list to memory circuit: expand, flatten, encode.

    Addresses the cubes leave undefined hold the word 0.  The angle
    encoding normalizes words to [0,1) (``fixedpoint01``, the default) or
    [0,4) (``fixedpoint04``); the improved-angle encoding uses the
    float-like split into significand and exponent.
    """
    flat = to_truth_table(assign_dont_cares(expand(table, max_rows=max_rows)))
    spec = spec_from_table(flat, encoding=encoding)
    if encoding == "basis":
        return synth_basis(spec)
    words = [x for _, x in spec.pairs]
    if encoding == "angle":
        chosen = scheme or "fixedpoint01"
        if chosen not in ("fixedpoint01", "fixedpoint04"):
            raise ValueError(f"angle encoding expects a fixed-point scheme, got {chosen!r}")
        normalized = normalize(words, chosen, width=spec.m,
                               strict_halfopen=strict_halfopen)
        return synth_angle(spec, improved=False, normalized=normalized)
    if encoding == "improved-angle":
        normalized = normalize(words, "floatlike", width=spec.m,
                               hidden_bit=hidden_bit)
        return synth_angle(spec, improved=True, normalized=normalized)
    raise ValueError(f"unknown encoding {encoding!r}")


def qrng_pipeline(bins, mode: str = "probability", prune: bool = False) -> Circuit:
    """Raw histogram heights to an amplitude-encoding circuit."""
    return synth_amplitude(normalize_pmf(bins, mode=mode), prune=prune)


def read_pmf(text: str) -> list[float]:
    """Parse histogram heights: one per line, or CSV ``bin,height`` rows.

    Blank lines and ``#`` comments are skipped.  CSV bins must cover
    0..count-1 exactly (any order); the count must be a power of two.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("no histogram lines found")
    if any("," in ln for ln in lines):
        heights: dict[int, float] = {}
        for row in csv.reader(io.StringIO("\n".join(lines))):
            if len(row) != 2:
                raise ValueError(f"expected bin,height but got {row!r}")
            b = int(row[0].strip())
            if b in heights:
                raise ValueError(f"bin {b} listed twice")
            heights[b] = float(row[1].strip())
        count = len(heights)
        if sorted(heights) != list(range(count)):
            raise ValueError("CSV bins must cover 0..count-1 exactly")
        values = [heights[b] for b in range(count)]
    else:
        values = [float(ln) for ln in lines]
    count = len(values)
    if count & (count - 1):
        raise NotPowerOfTwo(f"{count} histogram bins is not a power of two")
    return values

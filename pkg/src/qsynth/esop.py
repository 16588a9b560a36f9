"""Exclusive-sum-of-products synthesis.

A cube list is read with XOR semantics: an output bit is the parity of
the matching cubes that set it.  Cube lists produced by exclusive-cover
minimizers already mean exactly that, and for the common case of a
disjoint cover the XOR and OR readings agree on every minterm.  Callers
whose cubes mean OR and may overlap can ask for a disjointness check
with ``strict_or``.

The circuit mapping is direct: each (cube, hot output bit) pair becomes
one X gate targeting that output qubit, with a positive control per
input 1, a negative control per input 0, and no control for a dash.
Input qubits are never targeted, so inputs pass through unchanged and
outputs accumulate f(x) by parity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .circuit import Circuit, Gate
from .errors import WidthMismatch
from .pla import PlaTable


@dataclass(frozen=True)
class EsopSpec:
    """A cube list under XOR semantics with dash-free outputs."""

    n: int
    m: int
    cubes: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        for ins, outs in self.cubes:
            if len(ins) != self.n or len(outs) != self.m:
                raise WidthMismatch(f"cube {ins} {outs} does not match {self.n}/{self.m}")
            if "-" in outs:
                raise WidthMismatch("output don't-cares must be assigned before synthesis")


def _intersect(a: str, b: str) -> str | None:
    out = []
    for ca, cb in zip(a, b):
        if ca == "-":
            out.append(cb)
        elif cb == "-" or ca == cb:
            out.append(ca)
        else:
            return None
    return "".join(out)


def _overlapping_pairs(cubes) -> list[tuple[int, int]]:
    """Index pairs whose input fields intersect and whose outputs share a 1."""
    found = []
    for i in range(len(cubes)):
        ins_a, outs_a = cubes[i]
        for j in range(i + 1, len(cubes)):
            ins_b, outs_b = cubes[j]
            if _intersect(ins_a, ins_b) is None:
                continue
            if any(a == "1" and b == "1" for a, b in zip(outs_a, outs_b)):
                found.append((i, j))
    return found


def _cover_to_xor(cubes: list[tuple[str, str]], n: int, m: int) -> list[tuple[str, str]]:
    """Rewrite OR semantics as XOR semantics, output column by column.

    Folding a | b = a ^ b ^ ab over the cube list: adding a cube also adds
    its intersection with every term already present, so double-covered
    minterms get their parity corrected.  Used where a cover interpretation
    is required regardless of overlap (search predicates).
    """
    per_output: list[list[str]] = [[] for _ in range(m)]
    for k in range(m):
        terms: list[str] = []
        for ins, outs in cubes:
            if outs[k] != "1":
                continue
            overlaps = [t for t in (_intersect(e, ins) for e in terms) if t is not None]
            terms.append(ins)
            terms.extend(overlaps)
        per_output[k] = terms

    merged: dict[str, int] = {}
    for k, terms in enumerate(per_output):
        for ins in terms:
            merged[ins] = merged.get(ins, 0) ^ (1 << (m - 1 - k))
    out = []
    for ins, mask in merged.items():
        if mask:
            out.append((ins, format(mask, f"0{m}b")))
    return out


def _cancel_duplicates(cubes: list[tuple[str, str]], m: int) -> list[tuple[str, str]]:
    acc: dict[str, int] = {}
    for ins, outs in cubes:
        acc[ins] = acc.get(ins, 0) ^ int(outs, 2)
    return [(ins, format(mask, f"0{m}b")) for ins, mask in acc.items() if mask]


_MERGE = {("0", "1"): "-", ("1", "0"): "-", ("-", "0"): "1", ("0", "-"): "1",
          ("-", "1"): "0", ("1", "-"): "0"}


def _merge_pass(cubes: list[tuple[str, str]]) -> tuple[list[tuple[str, str]], bool]:
    """One greedy sweep of distance-1 merges within equal-output groups."""
    consumed = [False] * len(cubes)
    result: list[tuple[str, str]] = []
    changed = False
    for i, (ins_a, outs_a) in enumerate(cubes):
        if consumed[i]:
            continue
        merged_into = None
        for j in range(i + 1, len(cubes)):
            if consumed[j]:
                continue
            ins_b, outs_b = cubes[j]
            if outs_a != outs_b:
                continue
            diff = [k for k in range(len(ins_a)) if ins_a[k] != ins_b[k]]
            if len(diff) != 1:
                continue
            k = diff[0]
            sub = _MERGE.get((ins_a[k], ins_b[k]))
            if sub is None:
                continue
            merged_into = (ins_a[:k] + sub + ins_a[k + 1:], outs_a)
            consumed[j] = True
            changed = True
            break
        result.append(merged_into if merged_into is not None else (ins_a, outs_a))
    return result, changed


def to_esop(table: PlaTable, minimize: bool = False, strict_or: bool = False) -> EsopSpec:
    """Read a cube list as an exclusive cover.

    With ``minimize``, duplicate cubes are cancelled (x ^ x = 0) and
    distance-1 cube pairs merged, repeating until nothing changes.
    Neither pass is a full exclusive-cover minimizer; gate counts stay
    above what a dedicated minimizer would reach.

    ``strict_or`` warns when two cubes overlap on a shared output bit,
    which is the one situation where reading the list as XOR differs from
    reading it as a plain cover.
    """
    for _, outs in table.rows:
        if "-" in outs:
            raise WidthMismatch("assign output don't-cares before building an exclusive cover")
    cubes = list(table.rows)
    if strict_or:
        pairs = _overlapping_pairs(cubes)
        if pairs:
            warnings.warn(
                f"{len(pairs)} cube pair(s) overlap on a shared output bit; "
                "the XOR reading differs from the OR reading there"
            )
    if minimize:
        while True:
            cubes = _cancel_duplicates(cubes, table.m)
            cubes, changed = _merge_pass(cubes)
            if not changed:
                break
    return EsopSpec(n=table.n, m=table.m, cubes=tuple(cubes))


def evaluate_esop(spec: EsopSpec, x: int) -> int:
    """XOR evaluation of the cube list on one input word."""
    result = 0
    for ins, outs in spec.cubes:
        match = True
        for j, c in enumerate(ins):
            if c == "-":
                continue
            bit = (x >> (spec.n - 1 - j)) & 1
            if bit != int(c):
                match = False
                break
        if match:
            result ^= int(outs, 2)
    return result


def synth_esop(spec: EsopSpec) -> Circuit:
    """Map each (cube, hot output bit) to one multi-controlled X gate.

    Qubits 0..n-1 carry the inputs, n..n+m-1 the outputs.  The circuit
    sends |x>|y> to |x>|y ^ f(x)>.
    """
    n, m = spec.n, spec.m
    gates: list[Gate] = []
    for ins, outs in spec.cubes:
        controls = tuple((j, c == "1") for j, c in enumerate(ins) if c != "-")
        for k, bit in enumerate(outs):
            if bit == "1":
                gates.append(Gate("x", (n + k,), controls))
    labels = tuple(f"x{j}" for j in range(n)) + tuple(f"f{k}" for k in range(m))
    return Circuit(num_qubits=n + m, gates=tuple(gates), labels=labels)

"""Regenerate the packaged benchmark corpus (.pla and .pmf files).

The corpus mimics the shape of the classic two-level logic benchmark
set: each function keeps its traditional input/output widths and a
duplicate-output profile chosen so the reversible-embedding pipeline
lands on the documented qubit counts.  The logic itself is synthetic
(simple arithmetic formulas), so the files are small, reproducible, and
license-free.  Run from the repository root:

    python3 tools/gen_benchmarks.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from qsynth.pla import PlaTable, write_pla  # noqa: E402

OUT = ROOT / "src" / "qsynth" / "benchmarks"

MASK23 = (1 << 23) - 1
MASK55 = (1 << 55) - 1


def table(n: int, m: int, fn) -> PlaTable:
    rows = tuple(
        (format(x, f"0{n}b"), format(fn(x), f"0{m}b")) for x in range(1 << n))
    return PlaTable(n=n, m=m, rows=rows)


def z9sym_table() -> PlaTable:
    # ON-set rows only, in the usual symmetric-function style.
    rows = tuple(
        (format(x, "09b"), "1")
        for x in range(1 << 9) if 3 <= bin(x).count("1") <= 6)
    return PlaTable(n=9, m=1, rows=rows)


def apex4_table() -> PlaTable:
    # One dash per cube: 256 eight-bit prefixes over nine inputs.
    rows = tuple(
        (format(p, "08b") + "-", format((p * 40503) % (1 << 19), "019b"))
        for p in range(256))
    return PlaTable(n=9, m=19, rows=rows)


PLA_TABLES = {
    "squar5": table(5, 8, lambda x: (x * x) % 256),
    "Z9sym": z9sym_table(),
    "inc": table(7, 9, lambda x: 73 * (x % 5)),
    "Z5xp1": table(7, 10, lambda x: (73 * x + 21) % 1024),
    "dist": table(8, 5, lambda x: x % 13),
    "f51m": table(8, 8, lambda x: (37 * x + 11) % 256),
    "mlp4": table(8, 8, lambda x: ((x >> 4) * (x & 15)) % 32),
    "clip": table(9, 5, lambda x: x % 13),
    "addm4": table(9, 8, lambda x: 23 * (x % 11)),
    "b11": table(8, 31, lambda x: (x << 23) | ((x * 2654435761) & MASK23)),
    "apex4": apex4_table(),
    "ex5": table(8, 63, lambda x: (x << 55) | ((x * 0x9E3779B97F4A7C15) & MASK55)),
}


def pmf_lines(name: str, heights) -> str:
    body = "\n".join(repr(float(h)) for h in heights)
    return f"# {name}: 32-bin probability mass function\n{body}\n"


def lcg(state: int):
    while True:
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        yield state >> 40


def arbitrary_heights() -> list[float]:
    gen = lcg(7)
    return [round(0.1 + 0.9 * next(gen) / float(1 << 24), 6) for _ in range(32)]


PMF_TABLES = {
    "uniform": [1.0] * 32,
    "binomial": [math.comb(5, k) / 32.0 for k in range(6)] + [0.0] * 26,
    "triangle": [float(min(i + 1, 32 - i)) for i in range(32)],
    "bimodal": [0.2 if i in (8, 22) else 0.3 if i in (9, 23) else 0.0
                for i in range(32)],
    "arbitrary": arbitrary_heights(),
    "bell": [math.comb(31, k) / float(1 << 31) for k in range(32)],
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, pla in sorted(PLA_TABLES.items()):
        path = OUT / f"{name}.pla"
        path.write_text(write_pla(pla))
        print(f"wrote {path} ({pla.n} in / {pla.m} out, {len(pla.rows)} rows)")
    for name, heights in sorted(PMF_TABLES.items()):
        path = OUT / f"{name}.pmf"
        path.write_text(pmf_lines(name, heights))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()

"""OpenQASM 2.0 emission and parsing.

Emitted files are self-contained: every gate name used is defined in the
file from the builtin U and CX primitives, so no include is needed.
Multi-controlled names are generated per arity (mcx_3, mcrz_4, ...) with
small recursive bodies; the controlled bodies are exact, bare one-qubit
shorthands may differ from their IR matrices by a global phase only.

The parser reads files shaped like the emitter's output: definitions are
skipped by name (never expanded) and applications map straight back to
IR gates, so emit -> parse -> emit is byte-stable.  Anything outside
that statement repertoire raises UnsupportedStatement.
"""

from __future__ import annotations

import re

from .circuit import Circuit, Gate, lower_negative_controls
from .errors import UnsupportedGateForGateset, UnsupportedStatement

UNIFORM_GATESET = frozenset({"rx", "ry", "rz", "x", "h", "measure"})


# ---------------------------------------------------------------------------
# gate definitions
# ---------------------------------------------------------------------------

_BASE_DEFS: dict[str, tuple[str, tuple[str, ...]]] = {
    "u1": ("gate u1(lambda) a { U(0,0,lambda) a; }", ()),
    "x": ("gate x a { U(pi,0,pi) a; }", ()),
    "cx": ("gate cx a,b { CX a,b; }", ()),
    "z": ("gate z a { u1(pi) a; }", ("u1",)),
    "h": ("gate h a { U(pi/2,0,pi) a; }", ()),
    "sx": ("gate sx a { U(pi/2,-pi/2,pi/2) a; }", ()),
    "sxdg": ("gate sxdg a { U(-pi/2,-pi/2,pi/2) a; }", ()),
    "rx": ("gate rx(theta) a { U(theta,-pi/2,pi/2) a; }", ()),
    "ry": ("gate ry(theta) a { U(theta,0,0) a; }", ()),
    "rz": ("gate rz(theta) a { u1(theta) a; }", ("u1",)),
    "cz": ("gate cz a,b { h b; cx a,b; h b; }", ("h", "cx")),
    "cu1": (
        "gate cu1(lambda) a,b { u1(lambda/2) a; cx a,b; u1(-lambda/2) b; "
        "cx a,b; u1(lambda/2) b; }",
        ("u1", "cx"),
    ),
    "crz": (
        "gate crz(theta) a,b { u1(theta/2) b; cx a,b; u1(-theta/2) b; cx a,b; }",
        ("u1", "cx"),
    ),
    "cry": (
        "gate cry(theta) a,b { ry(theta/2) b; cx a,b; ry(-theta/2) b; cx a,b; }",
        ("ry", "cx"),
    ),
    "crx": ("gate crx(theta) a,b { h b; crz(theta) a,b; h b; }", ("h", "crz")),
    "csx": ("gate csx a,b { u1(pi/4) a; crx(pi/2) a,b; }", ("u1", "crx")),
    "csxdg": ("gate csxdg a,b { u1(-pi/4) a; crx(-pi/2) a,b; }", ("u1", "crx")),
    "ccx": (
        "gate ccx a,b,c { h c; cx b,c; u1(-pi/4) c; cx a,c; u1(pi/4) c; "
        "cx b,c; u1(-pi/4) c; cx a,c; u1(pi/4) b; u1(pi/4) c; h c; cx a,b; "
        "u1(pi/4) a; u1(-pi/4) b; cx a,b; }",
        ("h", "cx", "u1"),
    ),
    "ch": (
        "gate ch a,b { ry(-pi/4) b; cz a,b; ry(pi/4) b; }",
        ("ry", "cz"),
    ),
}

_MC_FAMILIES = ("u1", "x", "z", "rz", "rx", "ry", "h", "sx", "sxdg")


def _mc_name(family: str, k: int) -> str:
    """Name of the k-controlled member of a gate family."""
    if k == 0:
        return family
    if k == 1:
        return {"x": "cx", "z": "cz", "u1": "cu1", "rz": "crz", "rx": "crx",
                "ry": "cry", "h": "ch", "sx": "csx", "sxdg": "csxdg"}[family]
    if family == "x" and k == 2:
        return "ccx"
    return f"mc{family}_{k}"


def _mc_def(family: str, k: int) -> tuple[str, tuple[str, ...]]:
    """Definition text and dependencies for an arity-k family member."""
    cs = [f"c{i}" for i in range(1, k + 1)]
    args = ",".join(cs + ["t"])
    name = _mc_name(family, k)
    sub_x = _mc_name("x", k - 1)
    if family == "u1":
        tail = _mc_name("u1", k - 1)
        body = (
            f"cu1(lambda/2) {cs[-1]},t; {sub_x} {','.join(cs)}; "
            f"cu1(-lambda/2) {cs[-1]},t; {sub_x} {','.join(cs)}; "
            f"{tail}(lambda/2) {','.join(cs[:-1])},t;"
        )
        return f"gate {name}(lambda) {args} {{ {body} }}", ("cu1", sub_x, tail)
    if family == "x":
        inner = _mc_name("u1", k)
        return (
            f"gate {name} {args} {{ h t; {inner}(pi) {args}; h t; }}",
            ("h", inner),
        )
    if family == "z":
        inner = _mc_name("x", k)
        return (
            f"gate {name} {args} {{ h t; {inner} {args}; h t; }}",
            ("h", inner),
        )
    if family in ("rz", "ry"):
        base = _mc_name(family, 1)
        tail = _mc_name(family, k - 1)
        body = (
            f"{base}(theta/2) {cs[-1]},t; {sub_x} {','.join(cs)}; "
            f"{base}(-theta/2) {cs[-1]},t; {sub_x} {','.join(cs)}; "
            f"{tail}(theta/2) {','.join(cs[:-1])},t;"
        )
        return f"gate {name}(theta) {args} {{ {body} }}", (base, sub_x, tail)
    if family == "rx":
        inner = _mc_name("rz", k)
        return (
            f"gate {name}(theta) {args} {{ h t; {inner}(theta) {args}; h t; }}",
            ("h", inner),
        )
    if family == "h":
        inner = _mc_name("z", k)
        return (
            f"gate {name} {args} {{ ry(-pi/4) t; {inner} {args}; ry(pi/4) t; }}",
            ("ry", inner),
        )
    if family in ("sx", "sxdg"):
        sign = "" if family == "sx" else "-"
        phase = _mc_name("u1", k - 1)
        rot = _mc_name("rx", k)
        body = (
            f"{phase}({sign}pi/4) {','.join(cs)}; "
            f"{rot}({sign}pi/2) {args};"
        )
        return f"gate {name} {args} {{ {body} }}", (phase, rot)
    raise ValueError(f"no multi-controlled form for {family!r}")


def _definition(name: str) -> tuple[str, tuple[str, ...]]:
    if name in _BASE_DEFS:
        return _BASE_DEFS[name]
    m = re.fullmatch(r"mc([a-z0-9]+)_(\d+)", name)
    if not m or m.group(1) not in _MC_FAMILIES:
        raise ValueError(f"unknown gate name {name!r}")
    return _mc_def(m.group(1), int(m.group(2)))


def _collect_definitions(names) -> list[str]:
    """Definition lines for ``names`` plus dependencies, dependency-first."""
    emitted: list[str] = []
    done: set[str] = set()

    def visit(name: str) -> None:
        if name in done:
            return
        done.add(name)
        text, deps = _definition(name)
        for dep in deps:
            visit(dep)
        emitted.append(text)

    for name in sorted(names, key=_def_sort_key):
        visit(name)
    return emitted


_BASE_ORDER = list(_BASE_DEFS)


def _def_sort_key(name: str):
    if name in _BASE_DEFS:
        return (0, _BASE_ORDER.index(name), "")
    m = re.fullmatch(r"mc([a-z0-9]+)_(\d+)", name)
    return (1, int(m.group(2)), m.group(1))


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

_FAMILY_OF_KIND = {"x": "x", "z": "z", "cz": "z", "h": "h", "rx": "rx",
                   "ry": "ry", "rz": "rz", "sx": "sx", "sxdg": "sxdg"}


def _gate_name(gate: Gate) -> str:
    family = _FAMILY_OF_KIND[gate.kind]
    return _mc_name(family, gate.num_controls)


def emit_qasm(circuit: Circuit, gateset: str = "natural") -> str:
    """Serialize a circuit; ``gateset`` is ``natural`` or ``uniform``.

    The uniform gateset admits only plain x/h/rx/ry/rz, cx and measure
    and raises UnsupportedGateForGateset on anything else; emission never
    rewrites gates to fit.  Negative controls are X-conjugated away in
    both modes.  Angles are printed with repr so parsing them back is
    exact.
    """
    circuit = lower_negative_controls(circuit)
    names: set[str] = set()
    apps: list[str] = []
    measure_count = 0

    for gate in circuit.gates:
        if gate.kind == "measure":
            for q in gate.targets:
                apps.append(f"measure q[{q}] -> c[{measure_count}];")
                measure_count += 1
            continue
        if gateset == "uniform":
            ok = (
                gate.kind in UNIFORM_GATESET
                and gate.num_controls <= (1 if gate.kind == "x" else 0)
            )
            if not ok:
                raise UnsupportedGateForGateset(
                    f"{gate.kind} with {gate.num_controls} controls is outside "
                    "the uniform gateset"
                )
        elif gateset != "natural":
            raise ValueError(f"unknown gateset {gateset!r}")
        name = _gate_name(gate)
        names.add(name)
        operands = ",".join(
            f"q[{q}]" for q in [q for q, _ in gate.controls] + list(gate.targets)
        )
        if gate.angle is not None:
            apps.append(f"{name}({gate.angle!r}) {operands};")
        else:
            apps.append(f"{name} {operands};")

    lines = ["OPENQASM 2.0;"]
    if circuit.labels:
        lines.append("// labels: " + " ".join(circuit.labels))
    lines.extend(_collect_definitions(names))
    lines.append(f"qreg q[{circuit.num_qubits}];")
    if measure_count:
        lines.append(f"creg c[{measure_count}];")
    lines.extend(apps)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_APP_RE = re.compile(
    r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<param>[^)]*)\))?\s*"
    r"(?P<args>q\[\d+\](?:\s*,\s*q\[\d+\])*)$"
)
_MEASURE_RE = re.compile(r"^measure\s+q\[(\d+)\]\s*->\s*c\[(\d+)\]$")
_QREG_RE = re.compile(r"^qreg\s+q\[(\d+)\]$")
_CREG_RE = re.compile(r"^creg\s+c\[(\d+)\]$")
_MC_RE = re.compile(r"^mc(u1|x|z|rz|rx|ry|h|sx|sxdg)_(\d+)$")

# name -> (IR kind, control count); cz round-trips through the cz IR kind
_NAME_TABLE: dict[str, tuple[str, int]] = {
    "x": ("x", 0), "cx": ("x", 1), "ccx": ("x", 2),
    "z": ("z", 0), "cz": ("cz", 1),
    "h": ("h", 0), "ch": ("h", 1),
    "sx": ("sx", 0), "csx": ("sx", 1),
    "sxdg": ("sxdg", 0), "csxdg": ("sxdg", 1),
    "rx": ("rx", 0), "crx": ("rx", 1),
    "ry": ("ry", 0), "cry": ("ry", 1),
    "rz": ("rz", 0), "crz": ("rz", 1),
}


def _resolve_name(name: str) -> tuple[str, int]:
    hit = _NAME_TABLE.get(name)
    if hit:
        return hit
    m = _MC_RE.fullmatch(name)
    if m and m.group(1) != "u1":
        kind = {"x": "x", "z": "z", "rz": "rz", "rx": "rx", "ry": "ry",
                "h": "h", "sx": "sx", "sxdg": "sxdg"}[m.group(1)]
        return kind, int(m.group(2))
    raise UnsupportedStatement(f"unknown gate {name!r}")


def parse_qasm(text: str) -> Circuit:
    """Parse emitter-shaped OpenQASM 2.0 back into a circuit.

    Gate definitions are skipped (names are resolved from a fixed table),
    so parsing never expands macro bodies.  Statements outside the
    emitter's repertoire raise UnsupportedStatement.
    """
    labels: tuple[str, ...] = ()
    stripped: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("// labels:"):
            labels = tuple(line[len("// labels:"):].split())
            continue
        if "//" in line:
            line = line[: line.index("//")].strip()
        if line:
            stripped.append(line)
    body = " ".join(stripped)

    # remove gate definition blocks before splitting on semicolons
    defined: set[str] = set()
    def_re = re.compile(r"gate\s+([A-Za-z_][A-Za-z0-9_]*)[^{]*\{[^}]*\}")
    while True:
        m = def_re.search(body)
        if not m:
            break
        defined.add(m.group(1))
        body = body[: m.start()] + body[m.end():]

    statements = [s.strip() for s in body.split(";") if s.strip()]
    if not statements or statements[0] != "OPENQASM 2.0":
        raise UnsupportedStatement("file must start with OPENQASM 2.0;")

    num_qubits: int | None = None
    gates: list[Gate] = []
    for stmt in statements[1:]:
        m = _QREG_RE.fullmatch(stmt)
        if m:
            if num_qubits is not None:
                raise UnsupportedStatement("multiple qreg declarations")
            num_qubits = int(m.group(1))
            continue
        if _CREG_RE.fullmatch(stmt):
            continue
        m = _MEASURE_RE.fullmatch(stmt)
        if m:
            gates.append(Gate("measure", (int(m.group(1)),)))
            continue
        m = _APP_RE.fullmatch(stmt)
        if not m:
            raise UnsupportedStatement(f"cannot parse statement {stmt!r}")
        kind, num_controls = _resolve_name(m.group("name"))
        qubits = [int(tok) for tok in re.findall(r"q\[(\d+)\]", m.group("args"))]
        if len(qubits) != num_controls + 1:
            raise UnsupportedStatement(
                f"{m.group('name')} expects {num_controls + 1} operands, "
                f"got {len(qubits)}"
            )
        param = m.group("param")
        angle = None
        if param is not None:
            if kind not in ("rx", "ry", "rz"):
                raise UnsupportedStatement(f"unexpected parameter on {m.group('name')}")
            angle = float(param)
        elif kind in ("rx", "ry", "rz"):
            raise UnsupportedStatement(f"{m.group('name')} needs a parameter")
        controls = tuple((q, True) for q in qubits[:-1])
        gates.append(Gate(kind, (qubits[-1],), controls, angle))

    if num_qubits is None:
        raise UnsupportedStatement("missing qreg declaration")
    return Circuit(num_qubits=num_qubits, gates=tuple(gates), labels=labels)

"""Netlist generators: full adders, completion detectors, ripple carry adders."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .netlist import Gate, GateKind, Netlist, Port, merge, rails

K = GateKind


class FullAdderKind(enum.Enum):
    SEITZ_WEAK = "seitz-weak"
    SEITZ_EARLY = "seitz-early"
    AOPT_EO = "aopt-eo"
    LOPT_EO = "lopt-eo"

    @classmethod
    def parse(cls, name: str) -> "FullAdderKind":
        try:
            return cls(name)
        except ValueError:
            return cls[name.upper().replace("-", "_")]


FA_INPUTS = ("a", "b", "cin")
FA_OUTPUTS = ("sum", "cout")

# Product terms of the dual-rail full adder, as (a, b, cin) rail selections;
# None means the input does not appear in the term.
SUM1_TERMS = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))
SUM0_TERMS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))
COUT1_TERMS = ((0, 1, 1), (1, 0, 1), (1, 1, None))
COUT0_TERMS = ((0, 1, 0), (1, 0, 0), (0, 0, None))


def _rail(name, bit):
    return f"{name}.{bit}"


def _term_wires(term):
    return tuple(_rail(n, b) for n, b in zip(FA_INPUTS, term) if b is not None)


def _term_name(term):
    return "".join(f"{n[0]}{b}" for n, b in zip(FA_INPUTS, term) if b is not None)


def _fa_ports():
    return [Port.dual(n) for n in FA_INPUTS], [Port.dual(n) for n in FA_OUTPUTS]


def _seitz(weak: bool) -> Netlist:
    gates = []
    for out, terms in (("sum.1", SUM1_TERMS), ("sum.0", SUM0_TERMS),
                       ("cout.1", COUT1_TERMS), ("cout.0", COUT0_TERMS)):
        prods = []
        tag = out.replace(".", "")
        for t in terms:
            ws = _term_wires(t)
            w = f"{tag}_{_term_name(t)}"
            gates.append(Gate(f"and_{w}", K.AND3 if len(ws) == 3 else K.AND2, ws, w))
            prods.append(w)
        or_kind = {4: K.OR4, 3: K.OR3}[len(prods)]
        target = out
        if weak and out.startswith("sum"):
            target = "intsum" + out[-1]
        gates.append(Gate(f"or_{tag}", or_kind, tuple(prods), target))
    if weak:
        all_rails = tuple(w for n in FA_INPUTS for w in rails(n))
        gates.append(Gate("or_org", K.OR6, all_rails, "org"))
        gates.append(Gate("c_sum1", K.CE2, ("intsum1", "org"), "sum.1"))
        gates.append(Gate("c_sum0", K.CE2, ("intsum0", "org"), "sum.0"))
    ins, outs = _fa_ports()
    forks = {w for n in FA_INPUTS for w in rails(n)}
    return Netlist(gates, ins, outs, forks, "seitz-weak" if weak else "seitz-early")


def _aopt() -> Netlist:
    g = [
        Gate("cg1", K.AO22, ("a.1", "b.1", "a.0", "b.0"), "int1"),
        Gate("cg2", K.AO22, ("a.0", "b.1", "a.1", "b.0"), "int2"),
        Gate("icd", K.OR2, ("int1", "int2"), "int3"),
        Gate("cg3", K.AO22, ("int1", "cin.1", "int2", "cin.0"), "nsum1"),
        Gate("cg4", K.AO22, ("int1", "cin.0", "int2", "cin.1"), "nsum0"),
        Gate("cg5", K.AO22, ("int2", "cin.1", "a.1", "b.1"), "cout.1"),
        Gate("cg6", K.AO22, ("int2", "cin.0", "a.0", "b.0"), "cout.0"),
        Gate("c1", K.CE2, ("nsum1", "int3"), "sum.1"),
        Gate("c2", K.CE2, ("nsum0", "int3"), "sum.0"),
    ]
    ins, outs = _fa_ports()
    forks = {w for n in FA_INPUTS for w in rails(n)} | {"int1", "int2", "int3"}
    return Netlist(g, ins, outs, forks, "aopt-eo")


def _lopt() -> Netlist:
    g = [
        Gate("and_m1", K.AND2, ("a.1", "b.1"), "m1"),
        Gate("and_m2", K.AND2, ("a.0", "b.0"), "m2"),
        Gate("or_int1", K.OR2, ("m1", "m2"), "int1"),
        Gate("cg1", K.AO22, ("a.0", "b.1", "a.1", "b.0"), "int2"),
        Gate("icd", K.OR2, ("int1", "int2"), "int3"),
        Gate("cg2", K.AO22, ("int1", "cin.1", "int2", "cin.0"), "nsum1"),
        Gate("cg3", K.AO22, ("int1", "cin.0", "int2", "cin.1"), "nsum0"),
        Gate("cg4", K.AO21, ("int2", "cin.1", "m1"), "cout.1"),
        Gate("cg5", K.AO21, ("int2", "cin.0", "m2"), "cout.0"),
        Gate("c1", K.CE2, ("nsum1", "int3"), "sum.1"),
        Gate("c2", K.CE2, ("nsum0", "int3"), "sum.0"),
    ]
    ins, outs = _fa_ports()
    forks = {w for n in FA_INPUTS for w in rails(n)} | {"int1", "int2", "int3"}
    return Netlist(g, ins, outs, forks, "lopt-eo")


def build_full_adder(kind: FullAdderKind) -> Netlist:
    kind = FullAdderKind.parse(kind) if isinstance(kind, str) else kind
    return {
        FullAdderKind.SEITZ_WEAK: lambda: _seitz(True),
        FullAdderKind.SEITZ_EARLY: lambda: _seitz(False),
        FullAdderKind.AOPT_EO: _aopt,
        FullAdderKind.LOPT_EO: _lopt,
    }[kind]()


def build_completion_detector(num_dual_rail_inputs: int, ports=None,
                              ackout: str = "ackout") -> Netlist:
    """One OR2 per dual-rail pair, merged by a balanced C-element tree.

    ``ports`` optionally names the input pairs to watch (default ``i0``..).
    """
    if num_dual_rail_inputs < 1:
        raise ValueError("completion detector needs at least one input pair")
    if ports is None:
        ports = [Port.dual(f"i{k}") for k in range(num_dual_rail_inputs)]
    ports = list(ports)
    if len(ports) != num_dual_rail_inputs:
        raise ValueError("ports do not match num_dual_rail_inputs")
    gates = []
    level = []
    for k, p in enumerate(ports, 1):
        out = ackout if num_dual_rail_inputs == 1 else f"cd.or{k}"
        gates.append(Gate(f"cd.or{k}", K.OR2, (p.d1, p.d0), out))
        level.append(out)
    n = 0
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            n += 1
            last = len(level) == 2
            out = ackout if last else f"cd.c{n}"
            gates.append(Gate(f"cd.c{n}", K.CE2, (level[i], level[i + 1]), out))
            nxt.append(out)
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return Netlist(gates, ports, [Port.single(ackout)], frozenset(), "completion-detector")


@dataclass(frozen=True)
class Stage:
    """Port names of one full-adder stage inside an RCA."""

    index: int
    a: str
    b: str
    cin: str
    sum: str
    cout: str


@dataclass(frozen=True)
class AdderSystem:
    kind: FullAdderKind
    width: int
    rca: Netlist
    completion_detector: Netlist
    stages: tuple[Stage, ...]
    carry_in_port: str = "c0"
    carry_out_port: str = ""
    ackout: str = "ackout"

    @cached_property
    def netlist(self) -> Netlist:
        """RCA and completion detector sharing the primary input rails."""
        return merge(self.rca, self.completion_detector,
                     inputs=self.rca.inputs,
                     outputs=self.rca.outputs + self.completion_detector.outputs,
                     name=f"{self.rca.name}+cd")

    @property
    def sum_ports(self) -> list[str]:
        return [s.sum for s in self.stages]

    @property
    def data_outputs(self) -> tuple[Port, ...]:
        return self.rca.outputs


def build_rca(width: int, kind: FullAdderKind) -> AdderSystem:
    if width < 1:
        raise ValueError("width must be >= 1")
    kind = FullAdderKind.parse(kind) if isinstance(kind, str) else kind
    fa = build_full_adder(kind)
    parts, stages = [], []
    for i in range(width):
        ports = {"a": f"a{i}", "b": f"b{i}", "cin": f"c{i}", "sum": f"s{i}", "cout": f"c{i + 1}"}
        mapping = {}
        for w in fa.wires:
            base, _, bit = w.rpartition(".")
            if base in ports:
                mapping[w] = f"{ports[base]}.{bit}"
            else:
                mapping[w] = f"fa{i}.{w}"
        parts.append(fa.renamed(mapping, prefix=f"fa{i}."))
        stages.append(Stage(i, ports["a"], ports["b"], ports["cin"], ports["sum"], ports["cout"]))
    inputs = ([Port.dual(f"a{i}") for i in range(width)]
              + [Port.dual(f"b{i}") for i in range(width)] + [Port.dual("c0")])
    outputs = [Port.dual(f"s{i}") for i in range(width)] + [Port.dual(f"c{width}")]
    rca = merge(*parts, inputs=inputs, outputs=outputs, name=f"rca{width}-{kind.value}")
    carries = {w for i in range(1, width) for w in rails(f"c{i}")}
    rca = Netlist(rca.gates, rca.inputs, rca.outputs, rca.forks | carries, rca.name)
    cd = build_completion_detector(len(inputs), inputs)
    return AdderSystem(kind, width, rca, cd, tuple(stages), "c0", f"c{width}")


@dataclass(frozen=True)
class SystemModel:
    """An adder wrapped by a 4-phase RTZ environment (current/next-stage registers)."""

    adder: AdderSystem
    think_ps: int = 10


def build_handshake_system(adder: AdderSystem, think_ps: int = 10) -> SystemModel:
    return SystemModel(adder, think_ps)


def build_dual_rail_gate(op: str) -> Netlist:
    """Dual-rail AND or OR of two inputs built from plain gates.

    The AND's true rail is a bare AND2 (early reset); the OR's true rail is a
    bare OR2 (early set).
    """
    x1, x0 = rails("x")
    y1, y0 = rails("y")
    if op == "and":
        g = [Gate("t", K.AND2, (x1, y1), "z.1"), Gate("f", K.OR2, (x0, y0), "z.0")]
    elif op == "or":
        g = [Gate("t", K.OR2, (x1, y1), "z.1"), Gate("f", K.AND2, (x0, y0), "z.0")]
    else:
        raise ValueError(op)
    return Netlist(g, [Port.dual("x"), Port.dual("y")], [Port.dual("z")], frozenset(), f"dr-{op}")

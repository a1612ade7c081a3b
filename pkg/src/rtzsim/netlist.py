"""Wires, gates, dual-rail ports and netlist graphs.

Rails of a dual-rail signal ``x`` are conventionally named ``x.1`` and ``x.0``.
Netlists are immutable; derived lookup tables are cached on first use.
"""

from __future__ import annotations

import enum
import graphlib
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import IllegalCodeword

SPACER = "spacer"


class GateKind(enum.Enum):
    AND2 = "AND2"
    AND3 = "AND3"
    OR2 = "OR2"
    OR3 = "OR3"
    OR4 = "OR4"
    OR6 = "OR6"
    AO21 = "AO21"
    AO22 = "AO22"
    AO222 = "AO222"
    CE2 = "CE2"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def stateful(self) -> bool:
        return self is GateKind.CE2


_ARITY = {
    GateKind.AND2: 2, GateKind.AND3: 3,
    GateKind.OR2: 2, GateKind.OR3: 3, GateKind.OR4: 4, GateKind.OR6: 6,
    GateKind.AO21: 3, GateKind.AO22: 4, GateKind.AO222: 6,
    GateKind.CE2: 2,
}

# Kinds allowed to sit on a structural cycle (state holders).
SEQUENTIAL_KINDS = frozenset({GateKind.CE2, GateKind.AO222})


class DualRail(NamedTuple):
    d1: int
    d0: int


def dual_rail_encode(bit_or_spacer) -> DualRail:
    if bit_or_spacer == SPACER:
        return DualRail(0, 0)
    if bit_or_spacer in (0, 1) and not isinstance(bit_or_spacer, str):
        return DualRail(1, 0) if bit_or_spacer else DualRail(0, 1)
    raise ValueError(f"expected 0, 1 or {SPACER!r}, got {bit_or_spacer!r}")


def dual_rail_decode(pair) -> int | str:
    d1, d0 = pair
    if d1 not in (0, 1) or d0 not in (0, 1):
        raise ValueError(f"rails must be binary, got {tuple(pair)!r}")
    if d1 and d0:
        raise IllegalCodeword("illegal dual-rail state (1,1)")
    if d1:
        return 1
    if d0:
        return 0
    return SPACER


def rails(name: str) -> tuple[str, str]:
    return f"{name}.1", f"{name}.0"


@dataclass(frozen=True)
class Gate:
    id: str
    kind: GateKind
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class Port:
    """A named primary port: dual-rail (``d1``/``d0``) or single-rail (``wire``)."""

    name: str
    d1: str | None = None
    d0: str | None = None
    wire: str | None = None

    @classmethod
    def dual(cls, name: str, d1: str | None = None, d0: str | None = None) -> "Port":
        r1, r0 = rails(name)
        return cls(name, d1 or r1, d0 or r0)

    @classmethod
    def single(cls, name: str, wire: str | None = None) -> "Port":
        return cls(name, wire=wire or name)

    @property
    def is_dual(self) -> bool:
        return self.wire is None

    @property
    def wires(self) -> tuple[str, ...]:
        return (self.d1, self.d0) if self.is_dual else (self.wire,)


@dataclass(frozen=True)
class Netlist:
    gates: tuple[Gate, ...]
    inputs: tuple[Port, ...]
    outputs: tuple[Port, ...]
    forks: frozenset[str] = frozenset()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "forks", frozenset(self.forks))

    @cached_property
    def wires(self) -> frozenset[str]:
        ws = set()
        for g in self.gates:
            ws.update(g.inputs)
            ws.add(g.output)
        for p in self.inputs + self.outputs:
            ws.update(p.wires)
        return frozenset(ws)

    @cached_property
    def input_wires(self) -> tuple[str, ...]:
        return tuple(w for p in self.inputs for w in p.wires)

    @cached_property
    def output_wires(self) -> tuple[str, ...]:
        return tuple(w for p in self.outputs for w in p.wires)

    @cached_property
    def driver(self) -> dict[str, Gate]:
        return {g.output: g for g in self.gates}

    @cached_property
    def readers(self) -> dict[str, tuple[Gate, ...]]:
        r = defaultdict(list)
        for g in self.gates:
            for w in dict.fromkeys(g.inputs):
                r[w].append(g)
        return {w: tuple(gs) for w, gs in r.items()}

    @cached_property
    def gate_by_id(self) -> dict[str, Gate]:
        return {g.id: g for g in self.gates}

    def port(self, name: str) -> Port:
        for p in self.inputs + self.outputs:
            if p.name == name:
                return p
        raise KeyError(name)

    def inventory(self) -> Counter:
        return Counter(g.kind for g in self.gates)

    def topological_gates(self) -> list[Gate]:
        """Gates in dependency order, ignoring edges into state-holding kinds' feedback."""
        ts = graphlib.TopologicalSorter()
        for g in self.gates:
            preds = [self.driver[w].id for w in g.inputs
                     if w in self.driver and self.driver[w].id != g.id]
            ts.add(g.id, *preds)
        return [self.gate_by_id[i] for i in ts.static_order()]

    def renamed(self, mapping: dict[str, str], prefix: str = "") -> "Netlist":
        """Copy with wires renamed through ``mapping`` and gate ids prefixed."""
        def m(w):
            return mapping.get(w, w)
        gates = [Gate(prefix + g.id, g.kind, tuple(m(w) for w in g.inputs), m(g.output))
                 for g in self.gates]

        def mp(p):
            if p.is_dual:
                return Port(p.name, m(p.d1), m(p.d0))
            return Port(p.name, wire=m(p.wire))
        return Netlist(gates, [mp(p) for p in self.inputs], [mp(p) for p in self.outputs],
                       {m(w) for w in self.forks}, self.name)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __bool__(self):
        return not self.violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate_netlist(netlist: Netlist) -> ValidationReport:
    """List every structural problem; an empty report means well-formed."""
    out: list[Violation] = []

    ids = Counter(g.id for g in netlist.gates)
    for gid, n in sorted(ids.items()):
        if n > 1:
            out.append(Violation("duplicate-id", f"gate id {gid!r} used {n} times"))

    for g in netlist.gates:
        if len(g.inputs) != g.kind.arity:
            out.append(Violation(
                "arity", f"{g.id}: {g.kind.name} expects {g.kind.arity} inputs, got {len(g.inputs)}"))

    drivers = defaultdict(list)
    for g in netlist.gates:
        drivers[g.output].append(g.id)
    pi = set(netlist.input_wires)
    for w, gs in sorted(drivers.items()):
        if len(gs) > 1:
            out.append(Violation("multiple-drivers", f"wire {w!r} driven by {sorted(gs)}"))
        if w in pi:
            out.append(Violation("multiple-drivers", f"primary input {w!r} also driven by {gs}"))

    for g in netlist.gates:
        for w in g.inputs:
            if w not in pi and w not in drivers:
                out.append(Violation("dangling", f"{g.id}: input {w!r} has no driver"))
    for w in netlist.output_wires:
        if w not in drivers and w not in pi:
            out.append(Violation("dangling", f"primary output {w!r} has no driver"))

    seen = Counter()
    names = Counter()
    for p in netlist.inputs + netlist.outputs:
        names[p.name] += 1
        if p.is_dual:
            if p.d1 == p.d0:
                out.append(Violation("unpaired", f"port {p.name!r} uses {p.d1!r} for both rails"))
            seen.update((p.d1, p.d0))
        else:
            seen[p.wire] += 1
    for w, n in sorted(seen.items()):
        if n > 1:
            out.append(Violation("unpaired", f"rail {w!r} appears in {n} ports"))
    for nm, n in sorted(names.items()):
        if n > 1:
            out.append(Violation("duplicate-port", f"port name {nm!r} used {n} times"))

    for w in sorted(netlist.forks):
        if w not in netlist.wires:
            out.append(Violation("unknown-fork", f"fork annotation on unknown wire {w!r}"))

    # combinational cycles: state may only live in C-elements / AO222 feedback
    comb = {g.output: g for g in netlist.gates if g.kind not in SEQUENTIAL_KINDS}
    ts = graphlib.TopologicalSorter()
    for g in comb.values():
        ts.add(g.id, *[comb[w].id for w in g.inputs if w in comb])
    try:
        ts.prepare()
    except graphlib.CycleError as exc:
        cyc = exc.args[1]
        out.append(Violation("cycle", "combinational cycle through " + " -> ".join(cyc)))

    return ValidationReport(tuple(out))


def merge(*netlists: Netlist, inputs: Iterable[Port], outputs: Iterable[Port],
          name: str = "") -> Netlist:
    gates, forks = [], set()
    for n in netlists:
        gates.extend(n.gates)
        forks |= n.forks
    return Netlist(gates, list(inputs), list(outputs), forks, name)

"""Unacknowledged transitions (gate and wire orphans) in simulated traces.

An output edge acknowledges an input edge when the input edge triggered it,
or when the input's value at scheduling time was necessary for the edge:
flipping that input alone would have changed the gate's result.  Within one
handshake half-phase, every gate-output edge must reach an acknowledged sink
through these links.  Sinks are primary-output edges, acknowledge edges and,
under the relative-timing discipline, internal carry resets that precede the
next stage's sum reset.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from ..builders import AdderSystem
from ..cells import evaluate
from ..sim import Trace


@dataclass(frozen=True)
class Orphan:
    seq: int
    wire: str
    time: int
    phase: str | None
    txn: int
    kind: str  # "gate" or "wire"

    def as_dict(self) -> dict:
        return {"seq": self.seq, "wire": self.wire, "t": self.time, "phase": self.phase,
                "txn": self.txn, "kind": self.kind}


@dataclass
class OrphanReport:
    orphans: list[Orphan] = field(default_factory=list)

    def __len__(self):
        return len(self.orphans)

    def __bool__(self):
        return bool(self.orphans)

    def on_wire(self, wire: str) -> list[Orphan]:
        return [o for o in self.orphans if o.wire == wire]


def half_phase_windows(trace: Trace) -> list[tuple[int, float]]:
    """[start, end) intervals of each valid and each spacer half-phase."""
    recs = trace.records
    if not recs:
        return [(0, float("inf"))]
    cuts = []
    for r in recs:
        cuts.append(r.valid_time)
        if r.spacer_time is not None:
            cuts.append(r.spacer_time)
    cuts.append(float("inf"))
    return list(zip(cuts[:-1], cuts[1:]))


def acknowledgement_edges(trace: Trace) -> dict[int, set[int]]:
    """``effect seq -> {acknowledged event seqs}`` for every gate-output event."""
    net = trace.netlist
    gates = net.gate_by_id
    edges: dict[int, set[int]] = {}
    for f in trace.events:
        if f.gate is None or f.cause is None:
            continue
        g = gates[f.gate]
        c = trace.events[f.cause]
        held = 1 - f.value
        vals = [trace.value_before(w, c.time, c.seq) for w in g.inputs]
        acks = {c.seq}
        for w in set(g.inputs):
            flipped = [1 - v if wi == w else v for wi, v in zip(g.inputs, vals)]
            if evaluate(g.kind, flipped, held) != f.value:
                e = trace.last_event_before(w, c.time, c.seq)
                if e is not None:
                    acks.add(e.seq)
        edges[f.seq] = acks
    return edges


def _rt_covered(trace: Trace, system: AdderSystem, start, end) -> set[int]:
    covered = set()
    for st in system.stages[1:]:
        sum_falls = [e.time for w in (f"{st.sum}.1", f"{st.sum}.0")
                     for e in trace.by_wire.get(w, ()) if start <= e.time < end and e.value == 0]
        if not sum_falls:
            continue
        t_sum = max(sum_falls)
        for w in (f"{st.cin}.1", f"{st.cin}.0"):
            for e in trace.by_wire.get(w, ()):
                if start <= e.time < end and e.value == 0 and e.time <= t_sum:
                    covered.add(e.seq)
    return covered


def detect_orphans(trace: Trace, system: AdderSystem | None = None,
                   relative_timing: bool = True) -> OrphanReport:
    net = trace.netlist
    sink_wires = set(net.output_wires)
    forks = net.forks
    edges = acknowledgement_edges(trace)
    report = OrphanReport()
    for start, end in half_phase_windows(trace):
        window = [e for e in trace.events if start <= e.time < end]
        if not window:
            continue
        inside = {e.seq for e in window}
        sinks = {e.seq for e in window if e.wire in sink_wires}
        if system is not None and relative_timing:
            sinks |= _rt_covered(trace, system, start, end)
        seen = set(sinks)
        todo = deque(sinks)
        while todo:
            s = todo.popleft()
            for p in edges.get(s, ()):
                if p in inside and p not in seen:
                    seen.add(p)
                    todo.append(p)
        for e in window:
            if e.gate is not None and e.seq not in seen:
                report.orphans.append(Orphan(
                    e.seq, e.wire, e.time, e.phase.value if e.phase else None, e.txn,
                    "wire" if e.wire in forks else "gate"))
    return report


def reaches_sink(trace: Trace, seq: int, sinks: set[int]) -> bool:
    """Forward search from ``seq`` over acknowledgement edges (test helper)."""
    fwd = defaultdict(set)
    for eff, causes in acknowledgement_edges(trace).items():
        for c in causes:
            fwd[c].add(eff)
    seen, todo = {seq}, [seq]
    while todo:
        s = todo.pop()
        if s in sinks:
            return True
        for n in fwd[s]:
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return False

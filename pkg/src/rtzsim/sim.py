"""Deterministic discrete-event simulation under 4-phase RTZ handshaking.

Time is integer picoseconds.  Gates have a single per-kind delay; wires have
none.  A scheduled output edge is dropped if the gate re-evaluates to its
committed value before the edge lands, so each gate has at most one pending
edge and committed waveforms never contain zero-width pulses.

Events at the same instant commit in insertion order, with environment
actions first, then stimuli, then gate outputs.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
import io
import json
import re
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .builders import AdderSystem, SystemModel
from .cells import DelayModel, evaluate
from .errors import IllegalCodeword, Oscillation, ProtocolStall, RangeError
from .netlist import Gate, Netlist, dual_rail_decode, dual_rail_encode
from .paths import arrivals

DEFAULT_STEP_LIMIT = 10**7

_PRE, _STIM, _POST, _GATE = 0, 1, 2, 3


class Phase(enum.Enum):
    APPLY_VALID = "APPLY_VALID"
    AWAIT_ACK_HIGH = "AWAIT_ACK_HIGH"
    APPLY_SPACER = "APPLY_SPACER"
    AWAIT_ACK_LOW = "AWAIT_ACK_LOW"

    @property
    def is_set(self) -> bool:
        return self in (Phase.APPLY_VALID, Phase.AWAIT_ACK_HIGH)


class RtMode(enum.Enum):
    OFF = "off"
    CHECK = "check"
    ENFORCE = "enforce"


@dataclass(frozen=True)
class RtPolicy:
    """How the carry-before-sum reset ordering is treated.

    ENFORCE pads the cells driving sum outputs by ``pad_ps``; with no pad
    given, the pad is the latest structural arrival at any internal carry.
    """

    mode: RtMode = RtMode.OFF
    pad_ps: int | None = None

    @classmethod
    def parse(cls, text: str) -> "RtPolicy":
        return cls(RtMode(text.lower()))


@dataclass(frozen=True)
class Event:
    seq: int
    time: int
    wire: str
    value: int
    cause: int | None
    phase: Phase | None
    txn: int = 0
    gate: str | None = None

    def as_json(self) -> dict:
        return {"seq": self.seq, "t": self.time, "wire": self.wire, "v": self.value,
                "cause": self.cause, "phase": self.phase.value if self.phase else None}


@dataclass
class TimingRecord:
    txn: int
    a: int
    b: int
    cin: int
    valid_time: int
    spacer_time: int | None = None
    outputs_valid_time: int | None = None
    ack_high_time: int | None = None
    outputs_spacer_time: int | None = None
    ack_low_time: int | None = None
    sum: int | None = None
    cout: int | None = None

    @property
    def forward(self) -> int:
        return self.outputs_valid_time - self.valid_time

    @property
    def reverse(self) -> int:
        return self.outputs_spacer_time - self.spacer_time

    @property
    def cycle(self) -> int:
        return self.forward + self.reverse


_PHASES = (None, Phase.APPLY_VALID, Phase.AWAIT_ACK_HIGH, Phase.APPLY_SPACER, Phase.AWAIT_ACK_LOW)
_PHASE_CODE = {ph: i for i, ph in enumerate(_PHASES)}
_COLUMNS = ("t", "w", "v", "c", "p", "x", "g")


class Trace:
    """Committed events of one run.

    Backed either by a list of ``Event`` objects or by integer columns
    (``t``, ``w``, ``v``, ``c``, ``p``, ``x``, ``g``; -1 for absent cause/gate).
    Each view is built from the other on first use.
    """

    def __init__(self, events: list[Event] | None, netlist: Netlist, gate_delay: dict[str, int],
                 records: list[TimingRecord] | None = None, columns: dict | None = None):
        if events is None and columns is None:
            events = []
        if events is not None:
            self.__dict__["events"] = events
        if columns is not None:
            self.__dict__["columns"] = columns
        self.netlist = netlist
        self.gate_delay = gate_delay
        self.records = records if records is not None else []

    @cached_property
    def wire_names(self) -> list[str]:
        return sorted(self.netlist.wires)

    @cached_property
    def gate_ids(self) -> list[str]:
        return [g.id for g in self.netlist.gates]

    @cached_property
    def events(self) -> list[Event]:
        c = self.columns
        wn, gn = self.wire_names, self.gate_ids
        return [Event(i, t, wn[w], v, None if ca < 0 else ca, _PHASES[p], x, None if g < 0 else gn[g])
                for i, (t, w, v, ca, p, x, g) in enumerate(zip(*(c[k].tolist() for k in _COLUMNS)))]

    @cached_property
    def columns(self) -> dict:
        wid = {w: i for i, w in enumerate(self.wire_names)}
        gid = {g: i for i, g in enumerate(self.gate_ids)}
        ev = self.events
        return {
            "t": np.array([e.time for e in ev], dtype=np.int64),
            "w": np.array([wid[e.wire] for e in ev], dtype=np.int32),
            "v": np.array([e.value for e in ev], dtype=np.int8),
            "c": np.array([-1 if e.cause is None else e.cause for e in ev], dtype=np.int64),
            "p": np.array([_PHASE_CODE[e.phase] for e in ev], dtype=np.int8),
            "x": np.array([e.txn for e in ev], dtype=np.int32),
            "g": np.array([-1 if e.gate is None else gid[e.gate] for e in ev], dtype=np.int32),
        }

    def __len__(self):
        if "columns" in self.__dict__:
            return len(self.columns["t"])
        return len(self.events)

    def digest(self) -> str:
        """SHA-256 over the event columns and wire names."""
        h = hashlib.sha256("\n".join(self.wire_names).encode())
        for k in _COLUMNS:
            h.update(np.ascontiguousarray(self.columns[k], dtype=np.int64).tobytes())
        return h.hexdigest()

    @cached_property
    def by_wire(self) -> dict[str, list[Event]]:
        out: dict[str, list[Event]] = {}
        for e in self.events:
            out.setdefault(e.wire, []).append(e)
        return out

    @cached_property
    def _keys(self) -> dict[str, list[tuple[int, int]]]:
        return {w: [(e.time, e.seq) for e in hist] for w, hist in self.by_wire.items()}

    def last_event_before(self, wire: str, time: int, seq: int) -> Event | None:
        """Latest event on ``wire`` at or before the ordering point (time, seq)."""
        keys = self._keys.get(wire)
        if not keys:
            return None
        i = bisect_right(keys, (time, seq))
        return self.by_wire[wire][i - 1] if i else None

    def value_before(self, wire: str, time: int, seq: int) -> int:
        ev = self.last_event_before(wire, time, seq)
        return ev.value if ev else 0

    def gate_events(self) -> list[Event]:
        return [e for e in self.events if e.gate is not None]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.as_json()) + "\n" for e in self.events)

    def to_vcd(self, timescale: str = "1ps") -> str:
        wires = sorted(self.netlist.wires)
        ids = {w: _vcd_id(i) for i, w in enumerate(wires)}
        buf = io.StringIO()
        buf.write("$version rtzsim $end\n")
        buf.write(f"$timescale {timescale} $end\n")
        buf.write(f"$scope module {_vcd_name(self.netlist.name or 'top')} $end\n")
        for w in wires:
            buf.write(f"$var wire 1 {ids[w]} {_vcd_name(w)} $end\n")
        buf.write("$upscope $end\n$enddefinitions $end\n")
        buf.write("#0\n$dumpvars\n")
        for w in wires:
            buf.write(f"0{ids[w]}\n")
        buf.write("$end\n")
        t = None
        for e in self.events:
            if e.time != t:
                t = e.time
                buf.write(f"#{t}\n")
            buf.write(f"{e.value}{ids[e.wire]}\n")
        return buf.getvalue()


def _vcd_id(i: int) -> str:
    chars = [chr(c) for c in range(33, 127)]
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, len(chars))
        s = chars[r] + s
    return s


def _vcd_name(w: str) -> str:
    return re.sub(r"\s", "_", w)


_SUM_PORT = re.compile(r"^(sum|s\d+)$")


def sum_driver_gates(netlist: Netlist) -> set[str]:
    ids = set()
    for p in netlist.outputs:
        if p.is_dual and _SUM_PORT.match(p.name):
            for w in p.wires:
                if w in netlist.driver:
                    ids.add(netlist.driver[w].id)
    return ids


def internal_carry_rails(netlist: Netlist) -> list[str]:
    """Rails of ``c<k>`` signals that are neither primary inputs nor outputs."""
    prim = set(netlist.input_wires) | set(netlist.output_wires)
    return sorted(w for w in netlist.driver if re.match(r"^c\d+\.[01]$", w) and w not in prim)


def _gate_delays(netlist: Netlist, delays: DelayModel, rt: RtPolicy) -> dict[str, int]:
    d = {g.id: delays[g.kind] for g in netlist.gates}
    if rt.mode is RtMode.ENFORCE:
        pad = rt.pad_ps
        if pad is None:
            arr = arrivals(netlist, lambda g: d[g.id], netlist.input_wires)
            pad = max((arr[w][0] for w in internal_carry_rails(netlist) if w in arr), default=0)
        for gid in sum_driver_gates(netlist):
            d[gid] += pad
    return d


class Simulator:
    """Event-driven evaluator for one netlist; owns all mutable run state."""

    def __init__(self, netlist: Netlist, delays: DelayModel, rt: RtPolicy = RtPolicy(),
                 step_limit: int = DEFAULT_STEP_LIMIT):
        self.netlist = netlist
        self.gate_delay = _gate_delays(netlist, delays, rt)
        self.step_limit = step_limit
        self.values = {w: 0 for w in netlist.wires}
        self.now = 0
        self.phase: Phase | None = None
        self.txn = 0
        self.events: list[Event] = []
        self.listeners: list[Callable[[Event], None]] = []
        self._queue: list = []
        self._order = 0
        self._pending: dict[str, list] = {}
        self._driven = set(netlist.driver)
        self._inputs = set(netlist.input_wires)
        self._pair_of = {}
        for p in netlist.inputs + netlist.outputs:
            if p.is_dual:
                self._pair_of[p.d1] = (p.d1, p.d0)
                self._pair_of[p.d0] = (p.d1, p.d0)
        for g in netlist.gates:
            self._reevaluate(g, None)

    def _push(self, time, prio, entry):
        self._order += 1
        heapq.heappush(self._queue, (time, prio, self._order, entry))

    def drive(self, time: int, wire: str, value: int) -> None:
        if wire not in self._inputs:
            raise ValueError(f"stimulus on non-input wire {wire!r}")
        if value not in (0, 1):
            raise ValueError(f"stimulus value must be 0/1, got {value!r}")
        if time < self.now:
            raise ValueError("stimulus scheduled in the past")
        self._push(time, _STIM, ["stim", wire, value, None, None, True])

    def at(self, time: int, fn: Callable[[], None], post: bool = False) -> None:
        self._push(time, _POST if post else _PRE, ["act", fn, True])

    def _reevaluate(self, g: Gate, cause: int | None) -> None:
        cur = self.values[g.output]
        pend = self._pending.get(g.id)
        projected = pend[2] if pend else cur
        new = evaluate(g.kind, [self.values[w] for w in g.inputs], cur)
        if new == projected:
            return
        if pend:
            pend[-1] = False
            self._pending[g.id] = None
            return
        entry = ["gate", g.output, new, cause, g.id, True]
        self._pending[g.id] = entry
        self._push(self.now + self.gate_delay[g.id], _GATE, entry)

    def run(self, until: int | None = None) -> None:
        q = self._queue
        while q:
            if until is not None and q[0][0] > until:
                break
            t, _, _, entry = heapq.heappop(q)
            if not entry[-1]:
                continue
            self.now = t
            if entry[0] == "act":
                entry[1]()
                continue
            _, wire, value, cause, gid, _ = entry
            if gid is not None:
                self._pending[gid] = None
            if self.values[wire] == value:
                continue
            self._commit(wire, value, cause, gid)

    def _commit(self, wire, value, cause, gid):
        if len(self.events) >= self.step_limit:
            raise Oscillation(f"step limit {self.step_limit} exceeded at t={self.now}")
        ev = Event(len(self.events), self.now, wire, value, cause, self.phase, self.txn, gid)
        self.events.append(ev)
        self.values[wire] = value
        pair = self._pair_of.get(wire)
        if pair and self.values[pair[0]] and self.values[pair[1]]:
            raise IllegalCodeword(f"pair {pair} reached (1,1) at t={self.now} (event {ev.seq})")
        for fn in self.listeners:
            fn(ev)
        for g in self.netlist.readers.get(wire, ()):
            self._reevaluate(g, ev.seq)

    def trace(self) -> Trace:
        return Trace(list(self.events), self.netlist, dict(self.gate_delay))


ENGINES = ("compiled", "python")


def _check_engine(engine: str) -> None:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")


def _kernel_run(netlist: Netlist, gate_delay: dict[str, int], step_limit: int,
                stimuli=(), env=None):
    """Invoke the compiled loop; ``env`` is (codewords, cw_rails, spacer_rails, out pairs, ack, think)."""
    from . import _kernel

    cn = _kernel.Compiled(netlist, gate_delay)
    wid = cn.wid
    st = list(stimuli)
    st_t = np.array([t for t, _, _ in st], dtype=np.int64)
    st_w = np.array([wid[w] for _, w, _ in st], dtype=np.int64)
    st_v = np.array([v for _, _, v in st], dtype=np.int64)
    if env is None:
        cw = np.zeros((0, 0), dtype=np.int64)
        cw_rails = spacer = d1 = d0 = np.zeros(0, dtype=np.int64)
        ack, think = -1, 0
    else:
        cw, cw_names, sp_names, pairs, ack_name, think = env
        cw_rails = np.array([wid[w] for w in cw_names], dtype=np.int64)
        spacer = np.array([wid[w] for w in sp_names], dtype=np.int64)
        d1 = np.array([wid[a] for a, _ in pairs], dtype=np.int64)
        d0 = np.array([wid[b] for _, b in pairs], dtype=np.int64)
        ack = wid[ack_name]
    # the event buffer is fixed-size inside the loop; rerun with more room if it fills
    ecap = min(step_limit, max(1 << 12, 4 * (len(st) + len(cw) * len(cn.wire_names))))
    while True:
        out = _kernel.run(cn.kind, cn.in_ptr, cn.in_idx, cn.out, cn.delay, cn.rd_ptr, cn.rd_idx,
                          cn.partner, len(cn.wire_names), st_t, st_w, st_v,
                          env is not None, cw, cw_rails, spacer, d1, d0, ack, think,
                          step_limit, ecap)
        if out[0] != _kernel.FULL:
            break
        ecap = min(step_limit, 2 * ecap)
    status, now, phase, k, done = out[:5]
    if status == _kernel.OVERFLOW:
        return None
    cols = dict(zip(_COLUMNS, out[5:12]))
    trace = Trace(None, netlist, dict(gate_delay), columns=cols)
    if status == _kernel.ILLEGAL:
        w = cn.wire_names[int(cols["w"][-1])]
        p = cn.wire_names[int(cn.partner[wid[w]])]
        pair = (w, p) if w.endswith(".1") else (p, w)
        raise IllegalCodeword(f"pair {pair} reached (1,1) at t={now} (event {len(cols['t']) - 1})")
    if status == _kernel.OSCILLATION:
        raise Oscillation(f"step limit {step_limit} exceeded at t={now}")
    return trace, (now, _PHASES[phase], k, done), out[12], out[13]


def simulate(netlist: Netlist, stimuli: Iterable[tuple[int, str, int]], delays: DelayModel,
             rt: RtPolicy = RtPolicy(), step_limit: int = DEFAULT_STEP_LIMIT,
             engine: str = "compiled") -> Trace:
    """Run ``netlist`` from the all-zero state under timed input assignments."""
    _check_engine(engine)
    stimuli = sorted(stimuli, key=lambda s: s[0])
    if engine == "python":
        sim = Simulator(netlist, delays, rt, step_limit)
        for t, w, v in stimuli:
            sim.drive(t, w, v)
        sim.run()
        return sim.trace()
    inputs = set(netlist.input_wires)
    for t, w, v in stimuli:
        if w not in inputs:
            raise ValueError(f"stimulus on non-input wire {w!r}")
        if v not in (0, 1):
            raise ValueError(f"stimulus value must be 0/1, got {v!r}")
        if t < 0:
            raise ValueError("stimulus scheduled in the past")
    res = _kernel_run(netlist, _gate_delays(netlist, delays, rt), step_limit, stimuli)
    if res is None:
        # times or ordinals beyond the packed heap key; the reference loop has no such limit
        return simulate(netlist, stimuli, delays, rt, step_limit, engine="python")
    return res[0]


# --- handshake environment --------------------------------------------------

def operand_codewords(adder: AdderSystem, a: int, b: int, cin: int) -> dict[str, int]:
    """Rail values for the valid input codeword of (a, b, cin)."""
    n = adder.width
    if not (0 <= a < 2**n and 0 <= b < 2**n and cin in (0, 1)):
        raise RangeError(f"operands out of range for width {n}: a={a}, b={b}, cin={cin}")
    vals = {}
    for i in range(n):
        for name, bit in ((f"a{i}", (a >> i) & 1), (f"b{i}", (b >> i) & 1)):
            d1, d0 = dual_rail_encode(bit)
            vals[f"{name}.1"], vals[f"{name}.0"] = d1, d0
    d1, d0 = dual_rail_encode(cin)
    vals["c0.1"], vals["c0.0"] = d1, d0
    return vals


class _Environment:
    """Current-stage/next-stage registers around the adder.

    Valid data is withdrawn once the completion detector has acknowledged the
    inputs and the next stage holds a complete output codeword; the next
    codeword is sent once both have returned to spacer.
    """

    def __init__(self, sim: Simulator, system: SystemModel, operands):
        self.sim = sim
        self.adder = system.adder
        self.think = system.think_ps
        self.operands = list(operands)
        self.records: list[TimingRecord] = []
        self.k = -1
        self.waiting = False
        self.done = not self.operands
        self.out_pairs = [(p.d1, p.d0) for p in self.adder.data_outputs]
        self.input_rails = list(self.adder.rca.input_wires)
        sim.listeners.append(self.on_event)

    def _outputs(self, state: str) -> bool:
        v = self.sim.values
        if state == "valid":
            return all(v[a] or v[b] for a, b in self.out_pairs)
        return not any(v[a] or v[b] for a, b in self.out_pairs)

    def start(self, t: int = 0):
        if self.operands:
            self.sim.at(t, self._apply_valid)

    def _apply_valid(self):
        self.k += 1
        a, b, cin = self.operands[self.k]
        sim = self.sim
        sim.txn, sim.phase = self.k, Phase.APPLY_VALID
        for w, v in operand_codewords(self.adder, a, b, cin).items():
            sim.drive(sim.now, w, v)
        self.records.append(TimingRecord(self.k, a, b, cin, sim.now))
        sim.at(sim.now, self._await(Phase.AWAIT_ACK_HIGH), post=True)
        self.waiting = False

    def _apply_spacer(self):
        sim = self.sim
        sim.phase = Phase.APPLY_SPACER
        for w in self.input_rails:
            sim.drive(sim.now, w, 0)
        self.records[-1].spacer_time = sim.now
        sim.at(sim.now, self._await(Phase.AWAIT_ACK_LOW), post=True)
        self.waiting = False

    def _await(self, phase):
        def fn():
            self.sim.phase = phase
            self.on_event(None)
        return fn

    def _decode(self, rec: TimingRecord):
        v = self.sim.values
        bits = [dual_rail_decode((v[a], v[b])) for a, b in self.out_pairs]
        rec.sum = sum(bit << i for i, bit in enumerate(bits[:-1]))
        rec.cout = bits[-1]

    def on_event(self, ev: Event | None):
        if self.done or self.waiting or not self.records:
            return
        sim, rec = self.sim, self.records[-1]
        ack = sim.values[self.adder.ackout]
        if sim.phase in (Phase.APPLY_VALID, Phase.AWAIT_ACK_HIGH):
            if rec.outputs_valid_time is None and self._outputs("valid"):
                rec.outputs_valid_time = sim.now
                self._decode(rec)
            if rec.ack_high_time is None and ack:
                rec.ack_high_time = sim.now
            if sim.phase is Phase.AWAIT_ACK_HIGH and rec.outputs_valid_time is not None and ack:
                self.waiting = True
                sim.at(sim.now + self.think, self._apply_spacer)
        else:
            if rec.outputs_spacer_time is None and self._outputs("spacer"):
                rec.outputs_spacer_time = sim.now
            if rec.ack_low_time is None and not ack:
                rec.ack_low_time = sim.now
            if sim.phase is Phase.AWAIT_ACK_LOW and rec.outputs_spacer_time is not None and not ack:
                self.waiting = True
                if self.k + 1 < len(self.operands):
                    sim.at(sim.now + self.think, self._apply_valid)
                else:
                    self.done = True


def _check_operands(adder: AdderSystem, operand_pairs) -> None:
    n = adder.width
    try:
        ops = np.array(operand_pairs, dtype=np.int64).reshape(-1, 3)
        ok = bool(((ops[:, :2] >= 0) & (ops[:, :2] < 2**n)).all() and np.isin(ops[:, 2], (0, 1)).all())
    except (OverflowError, ValueError, TypeError):
        ok = False
    if not ok:
        for a, b, cin in operand_pairs:
            operand_codewords(adder, a, b, cin)
        raise RangeError(f"operands out of range for width {n}")


def _codeword_matrix(adder: AdderSystem, ops: np.ndarray) -> tuple[np.ndarray, list[str]]:
    names = list(operand_codewords(adder, 0, 0, 0))
    cols = []
    for name in names:
        sig, rail = name.split(".")
        src = {"a": 0, "b": 1, "c": 2}[sig[0]]
        bit = (ops[:, src] >> int(sig[1:]) if sig[0] != "c" else ops[:, src]) & 1
        cols.append(bit if rail == "1" else 1 - bit)
    return np.stack(cols, axis=1).astype(np.int64), names


def run_transactions(system: SystemModel | AdderSystem, operand_pairs: Sequence[tuple[int, int, int]],
                     delays: DelayModel, rt: RtPolicy = RtPolicy(),
                     step_limit: int = DEFAULT_STEP_LIMIT,
                     engine: str = "compiled") -> tuple[Trace, list[TimingRecord]]:
    """Execute one full 4-phase transaction per ``(a, b, cin)``."""
    _check_engine(engine)
    if isinstance(system, AdderSystem):
        system = SystemModel(system)
    _check_operands(system.adder, operand_pairs)
    if engine == "python":
        return _run_transactions_python(system, operand_pairs, delays, rt, step_limit)
    adder = system.adder
    ops = np.array(operand_pairs, dtype=np.int64).reshape(-1, 3)
    cw, names = _codeword_matrix(adder, ops)
    pairs = [(p.d1, p.d0) for p in adder.data_outputs]
    env = (cw, names, list(adder.rca.input_wires), pairs, adder.ackout, system.think_ps)
    res = _kernel_run(adder.netlist, _gate_delays(adder.netlist, delays, rt), step_limit, env=env)
    if res is None:
        return _run_transactions_python(system, operand_pairs, delays, rt, step_limit)
    trace, (now, phase, k, done), rec, bits = res
    nrec = k + 1
    weights = 1 << np.arange(len(pairs) - 1, dtype=np.int64)
    sums = (bits[:, :-1].astype(np.int64) * weights).sum(axis=1)
    records = []
    for i in range(nrec):
        r = [None if x < 0 else int(x) for x in rec[i].tolist()]
        valid = r[2] is not None
        a, b, cin = operand_pairs[i]
        records.append(TimingRecord(i, a, b, cin, r[0], r[1], r[2], r[3], r[4], r[5],
                                    int(sums[i]) if valid else None,
                                    int(bits[i, -1]) if valid else None))
    if not done:
        raise ProtocolStall(f"environment stuck in {phase} at t={now}"
                            + (f" (transaction {nrec - 1})" if nrec else ""))
    trace.records = records
    return trace, records


def _run_transactions_python(system, operand_pairs, delays, rt, step_limit):
    sim = Simulator(system.adder.netlist, delays, rt, step_limit)
    env = _Environment(sim, system, operand_pairs)
    env.start(0)
    sim.run()
    if not env.done:
        rec = env.records[-1] if env.records else None
        raise ProtocolStall(f"environment stuck in {sim.phase} at t={sim.now}"
                            + (f" (transaction {rec.txn})" if rec else ""))
    trace = sim.trace()
    trace.records = env.records
    return trace, env.records


# --- relative-timing check --------------------------------------------------

@dataclass(frozen=True)
class RtViolation:
    txn: int
    stage: int
    carry_wire: str
    carry_fall: int | None
    sum_fall: int

    def __str__(self):
        cf = "never" if self.carry_fall is None else f"t={self.carry_fall}"
        return (f"txn {self.txn} stage {self.stage}: sum reset at t={self.sum_fall} "
                f"before carry {self.carry_wire} reset ({cf})")


def reset_windows(trace: Trace) -> list[tuple[int, int, float]]:
    """(txn, start, end) of every return-to-zero phase in the trace."""
    if not trace.records:
        return [(0, 0, float("inf"))]
    out = []
    recs = trace.records
    for i, r in enumerate(recs):
        if r.spacer_time is None:
            continue
        end = recs[i + 1].valid_time if i + 1 < len(recs) else float("inf")
        out.append((r.txn, r.spacer_time, end))
    return out


def check_relative_timing(trace: Trace, system: AdderSystem) -> list[RtViolation]:
    """Stages whose sum returned to zero strictly before their carry input did."""
    out = []
    for txn, start, end in reset_windows(trace):
        for st in system.stages[1:]:
            sum_falls = [e.time for w in (f"{st.sum}.1", f"{st.sum}.0")
                         for e in trace.by_wire.get(w, ()) if start <= e.time < end and e.value == 0]
            if not sum_falls:
                continue
            t_sum = max(sum_falls)
            for w in (f"{st.cin}.1", f"{st.cin}.0"):
                falls = [e.time for e in trace.by_wire.get(w, ()) if e.value == 0 and e.time >= start]
                inside = [t for t in falls if t < end]
                if not inside and trace.value_before(w, start, -1) != 1:
                    continue
                t_c = min(falls) if falls else None
                if t_c is None or t_sum < t_c:
                    out.append(RtViolation(txn, st.index, w, t_c, t_sum))
    return out


"""Latency measurement, the analytic cycle-time model, slacks and critical paths."""

from __future__ import annotations

import csv
import enum
import io
import statistics
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

from ..builders import FullAdderKind, build_full_adder, build_rca
from ..cells import DelayModel, data_dir
from ..errors import DomainError, UnsupportedKind
from ..netlist import GateKind, rails
from ..paths import longest_path
from ..sim import TimingRecord


def ns(x: float, places: int = 2) -> str:
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


# --- measured latencies -----------------------------------------------------

@dataclass(frozen=True)
class Stat:
    min: float
    mean: float
    max: float


@dataclass
class TimingReport:
    forward: Stat
    reverse: Stat
    cycle: Stat
    per_transaction: list[dict] = field(default_factory=list)

    @property
    def forward_latency(self) -> float:
        return self.forward.max

    @property
    def reverse_latency(self) -> float:
        return self.reverse.max

    @property
    def cycle_time(self) -> float:
        return self.cycle.max

    def as_dict(self) -> dict:
        return {
            "forward_ps": vars(self.forward), "reverse_ps": vars(self.reverse),
            "cycle_ps": vars(self.cycle), "transactions": self.per_transaction,
        }


def _stat(xs):
    return Stat(min(xs), statistics.fmean(xs), max(xs))


def measure_latencies(records: Sequence[TimingRecord]) -> TimingReport:
    if not records:
        raise ValueError("need at least one timing record")
    fw = [r.forward for r in records]
    rv = [r.reverse for r in records]
    cy = [r.forward + r.reverse for r in records]
    rows = [{"txn": r.txn, "a": r.a, "b": r.b, "cin": r.cin, "sum": r.sum, "cout": r.cout,
             "forward_ps": r.forward, "reverse_ps": r.reverse, "cycle_ps": r.forward + r.reverse}
            for r in records]
    return TimingReport(_stat(fw), _stat(rv), _stat(cy), rows)


def forced_chain_operands(width: int, m: int) -> tuple[int, int, int]:
    """Generate at bit 0, propagate at bits 1..m-1, kill above; carry-in 0."""
    if not 1 <= m <= width:
        raise DomainError(f"chain length {m} outside 1..{width}")
    a = b = 1
    for i in range(1, m):
        a |= 1 << i
    return a, b, 0


# --- analytic model ---------------------------------------------------------

class CycleStyle(enum.Enum):
    STRONG = "STRONG"
    WEAK_BASIC = "WEAK_BASIC"
    WEAK_DISTRIBUTED = "WEAK_DISTRIBUTED"
    EARLY_OUTPUT = "EARLY_OUTPUT"
    RELATIVE_TIMED = "RELATIVE_TIMED"


def analytic_cycle_time(style: CycleStyle, n: int, m: int, t_fa: float) -> dict[str, float]:
    """Forward/reverse latency and cycle time in units of ``t_fa``'s time unit."""
    style = CycleStyle(style)
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    if t_fa <= 0:
        raise DomainError("full adder delay must be positive")
    if style is CycleStyle.STRONG:
        fwd, rev = n * t_fa, n * t_fa
    elif style is CycleStyle.WEAK_BASIC:
        fwd, rev = m * t_fa, m * t_fa
    elif style in (CycleStyle.WEAK_DISTRIBUTED, CycleStyle.EARLY_OUTPUT):
        fwd, rev = m * t_fa, 2 * t_fa
    else:
        fwd, rev = m * t_fa, t_fa
    return {"forward": fwd, "reverse": rev, "cycle": fwd + rev}


@dataclass(frozen=True)
class Table2Row:
    adder: str
    style: CycleStyle
    power_uW: str
    latency_ns: float
    rca_area_um2: str
    fa_area_um2: str


def load_table2(path: str | Path | None = None) -> list[Table2Row]:
    path = Path(path) if path else data_dir() / "table2.csv"
    with open(path, newline="") as fh:
        return [Table2Row(r["adder"], CycleStyle(r["style"]), r["power_uW"], float(r["latency_ns"]),
                          r["rca_area_um2"], r["fa_area_um2"]) for r in csv.DictReader(fh)]


def load_table4(path: str | Path | None = None) -> dict[str, dict[int, float]]:
    path = Path(path) if path else data_dir() / "table4.csv"
    with open(path, newline="") as fh:
        return {r["adder"]: {m: float(r[f"m{m}"]) for m in CHAIN_LENGTHS} for r in csv.DictReader(fh)}


CHAIN_LENGTHS = (4, 8, 16, 32)


@dataclass
class CycleRow:
    adder: str
    style: CycleStyle
    t_fa_ns: float
    cycle_ns: dict[int, float]
    published: dict[int, float] | None = None

    def delta(self, m: int) -> float | None:
        if not self.published:
            return None
        return self.cycle_ns[m] - self.published[m]


@dataclass
class CycleTable:
    rows: list[CycleRow]
    width: int = 32

    def max_abs_delta(self) -> float:
        return max(abs(r.delta(m)) for r in self.rows if r.published for m in CHAIN_LENGTHS)

    def cells(self) -> int:
        return sum(len(r.cycle_ns) for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["adder", "style"] + [f"m{m}" for m in CHAIN_LENGTHS]
                   + [f"delta_m{m}" for m in CHAIN_LENGTHS])
        for r in self.rows:
            deltas = [("" if r.delta(m) is None else ns(r.delta(m), 3)) for m in CHAIN_LENGTHS]
            w.writerow([r.adder, r.style.value] + [ns(r.cycle_ns[m]) for m in CHAIN_LENGTHS] + deltas)
        return buf.getvalue()


def reproduce_table4(table2: Sequence[Table2Row] | None = None,
                     published: dict[str, dict[int, float]] | None = None,
                     width: int = 32) -> CycleTable:
    """Cycle times for chain lengths 4/8/16/32 from averaged per-adder delays."""
    table2 = load_table2() if table2 is None else table2
    if published is None:
        try:
            published = load_table4()
        except FileNotFoundError:
            published = {}
    rows = []
    for r in table2:
        t_fa = r.latency_ns / width
        cyc = {m: analytic_cycle_time(r.style, width, m, t_fa)["cycle"] for m in CHAIN_LENGTHS}
        rows.append(CycleRow(r.adder, r.style, t_fa, cyc, published.get(r.adder)))
    return CycleTable(rows, width)


# --- structural path analysis ------------------------------------------------

@dataclass(frozen=True)
class SlackReport:
    kind: FullAdderKind
    direct_ps: int
    indirect_ps: int
    direct_path: tuple[str, ...]
    indirect_path: tuple[str, ...]
    generate_direct_ps: int | None = None
    generate_indirect_ps: int | None = None

    @property
    def slack_ps(self) -> int:
        return self.indirect_ps - self.direct_ps

    @property
    def generate_slack_ps(self) -> int | None:
        if self.generate_direct_ps is None:
            return None
        return self.generate_indirect_ps - self.generate_direct_ps

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "direct_ps": self.direct_ps, "indirect_ps": self.indirect_ps,
                "slack_ps": self.slack_ps, "direct_path": list(self.direct_path),
                "indirect_path": list(self.indirect_path),
                "generate_direct_ps": self.generate_direct_ps,
                "generate_indirect_ps": self.generate_indirect_ps,
                "generate_slack_ps": self.generate_slack_ps}


# Per-stage node that detects the carry-propagate condition.
PROPAGATE_NODE = {FullAdderKind.AOPT_EO: "int2", FullAdderKind.LOPT_EO: "int2"}


def compute_timing_slack(kind: FullAdderKind, delays: DelayModel) -> SlackReport:
    """Indirect (through the previous stage's carry) minus direct sum-reset path.

    Both paths are the longest structural paths in a two-stage cascade: from
    stage 1's operand rails to its sum (direct) and from stage 0's operand
    rails to stage 1's sum (indirect, necessarily through the carry).
    """
    kind = FullAdderKind.parse(kind) if isinstance(kind, str) else kind
    if kind is FullAdderKind.SEITZ_WEAK:
        raise UnsupportedKind("the weak-indication adder needs no relative-timing assumption")
    net = build_rca(2, kind).rca
    d = lambda g: delays[g.kind]  # noqa: E731
    sinks = rails("s1")
    src1 = rails("a1") + rails("b1")
    src0 = rails("a0") + rails("b0")
    direct = longest_path(net, d, src1, sinks)
    indirect = longest_path(net, d, src0, sinks)
    gd = gi = None
    if kind in PROPAGATE_NODE:
        avoid = [f"fa{i}.{PROPAGATE_NODE[kind]}" for i in (0, 1)]
        gd = longest_path(net, d, src1, sinks, avoid=avoid)[0]
        gi = longest_path(net, d, src0, sinks, avoid=avoid)[0]
    names = lambda p: tuple(net.gate_by_id[g].kind.name for g in p)  # noqa: E731
    return SlackReport(kind, direct[0], indirect[0], names(direct[1]), names(indirect[1]), gd, gi)


def critical_path_elements(kind: FullAdderKind, delays: DelayModel | None = None) -> list[GateKind]:
    """Gate kinds on the longest carry-in -> carry-out path of one stage."""
    kind = FullAdderKind.parse(kind) if isinstance(kind, str) else kind
    net = build_full_adder(kind)
    if delays is None:
        delays = DelayModel.uniform()
    hit = longest_path(net, lambda g: delays[g.kind], rails("cin"), rails("cout"))
    return [net.gate_by_id[g].kind for g in hit[1]]


def load_table3(path: str | Path | None = None) -> dict[str, list[str]]:
    path = Path(path) if path else data_dir() / "table3.csv"
    with open(path, newline="") as fh:
        out = {}
        for r in csv.DictReader(fh):
            kinds = []
            for part in r["critical_path"].split(";"):
                toks = part.split()
                n = int(toks[0]) if len(toks) == 2 else 1
                kinds += [toks[-1]] * n
            out[r["adder"]] = kinds
        return out


TABLE3_ROW = {
    FullAdderKind.SEITZ_EARLY: "Seitz (1979) early output version-relative-timed",
    FullAdderKind.AOPT_EO: "AOPT_EO_FA-relative-timed",
    FullAdderKind.LOPT_EO: "LOPT_EO_FA-relative-timed",
}


def _stage1_sum_ready(kind: FullAdderKind, delays: DelayModel, reset: tuple[str, ...]) -> int:
    """Time at which stage 1's sum cell could fall after resetting ``reset``.

    Both stages propagate a true carry (a=11, b=00, cin=1).  Only the named
    operand pairs return to spacer; the latest falling input of a stage-1
    sum-driving cell plus that cell's delay is reported.
    """
    from ..sim import Simulator, operand_codewords, sum_driver_gates

    system = build_rca(2, kind)
    net = system.rca
    sim = Simulator(net, delays)
    for w, v in operand_codewords(system, 0b11, 0b00, 1).items():
        sim.drive(0, w, v)
    sim.run()
    t0 = sim.now + 1
    mark = len(sim.events)
    for p in reset:
        for w in rails(p):
            sim.drive(t0, w, 0)
    sim.run()
    drivers = [net.gate_by_id[g] for g in sorted(sum_driver_gates(net)) if g.startswith("fa1.")]
    best = None
    for g in drivers:
        falls = [e.time for e in sim.events[mark:] if e.wire in g.inputs and e.value == 0]
        if falls:
            t = max(falls) - t0 + delays[g.kind]
            best = t if best is None else max(best, t)
    if best is None:
        raise DomainError("no stage-1 sum input fell")
    return best


def measure_slack_by_simulation(kind: FullAdderKind, delays: DelayModel) -> dict[str, int]:
    """Direct and indirect sum-reset delays taken from two-stage simulations."""
    kind = FullAdderKind.parse(kind) if isinstance(kind, str) else kind
    if kind is FullAdderKind.SEITZ_WEAK:
        raise UnsupportedKind("the weak-indication adder needs no relative-timing assumption")
    direct = _stage1_sum_ready(kind, delays, ("a1", "b1"))
    indirect = _stage1_sum_ready(kind, delays, ("a0", "b0"))
    return {"direct_ps": direct, "indirect_ps": indirect, "slack_ps": indirect - direct}

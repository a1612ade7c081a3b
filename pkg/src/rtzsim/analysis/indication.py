"""Strong / weak / early indication classification by exhaustive subset runs."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from ..cells import DelayModel
from ..errors import DomainError, TooManyInputs
from ..netlist import Netlist
from ..sim import Simulator

MAX_INPUTS = 12


class Indication(enum.Enum):
    STRONG = "STRONG"
    WEAK = "WEAK"
    EARLY = "EARLY"


@dataclass(frozen=True)
class IndicationClass:
    set_phase: Indication
    reset_phase: Indication

    @property
    def overall(self) -> Indication:
        if Indication.EARLY in (self.set_phase, self.reset_phase):
            return Indication.EARLY
        if self.set_phase is self.reset_phase is Indication.STRONG:
            return Indication.STRONG
        return Indication.WEAK

    def as_dict(self) -> dict:
        return {"set_phase": self.set_phase.value, "reset_phase": self.reset_phase.value,
                "overall": self.overall.value}


def proper_subsets(n: int) -> list[tuple[int, ...]]:
    return [s for k in range(n) for s in combinations(range(n), k)]


def classify_indication(netlist: Netlist, delays: DelayModel,
                        subset_order: Sequence[tuple[int, ...]] | None = None) -> IndicationClass:
    """Classify each handshake phase from the all-spacer / all-valid start states.

    Set phase: apply only a proper subset of a valid codeword.  Reset phase:
    from a settled valid state, return only a proper subset to spacer.
    EARLY means some codeword and subset complete every output; STRONG means
    no output rail moves for any of them.
    """
    ins = [p for p in netlist.inputs if p.is_dual]
    # a single-rail output (an acknowledge) counts as complete when high
    outs = [(p.d1, p.d0) if p.is_dual else (p.wire, p.wire) for p in netlist.outputs]
    if not outs:
        raise DomainError("netlist has no outputs to classify")
    if len(ins) > MAX_INPUTS:
        raise TooManyInputs(f"{len(ins)} dual-rail inputs; at most {MAX_INPUTS} supported")
    subsets = list(subset_order) if subset_order is not None else proper_subsets(len(ins))
    out_wires = {w for pair in outs for w in pair}

    def rails_of(cw, idx):
        return [ins[i].d1 if cw[i] else ins[i].d0 for i in idx]

    set_moved = set_early = False
    reset_moved = reset_early = False
    for cw in product((0, 1), repeat=len(ins)):
        full = rails_of(cw, range(len(ins)))
        for s in subsets:
            sim = Simulator(netlist, delays)
            for w in rails_of(cw, s):
                sim.drive(0, w, 1)
            sim.run()
            if any(e.wire in out_wires for e in sim.events):
                set_moved = True
            if all(sim.values[a] or sim.values[b] for a, b in outs):
                set_early = True

            sim = Simulator(netlist, delays)
            for w in full:
                sim.drive(0, w, 1)
            sim.run()
            mark = len(sim.events)
            for w in rails_of(cw, s):
                sim.drive(sim.now + 1, w, 0)
            sim.run()
            if any(e.wire in out_wires for e in sim.events[mark:]):
                reset_moved = True
            if not any(sim.values[a] or sim.values[b] for a, b in outs):
                reset_early = True

    def verdict(moved, early):
        if early:
            return Indication.EARLY
        return Indication.WEAK if moved else Indication.STRONG

    return IndicationClass(verdict(set_moved, set_early), verdict(reset_moved, reset_early))

from collections import defaultdict

import pytest

from rtzsim.analysis import acknowledgement_edges, detect_orphans
from rtzsim.analysis.orphans import half_phase_windows
from rtzsim.builders import FullAdderKind, build_rca
from rtzsim.sim import run_transactions


def _exhaustive(width, rounds=1):
    return [(a, b, c) for a in range(2**width) for b in range(2**width) for c in (0, 1)] * rounds


def _forward_reach(trace, start, window, sinks):
    """Independent forward search from one event to any sink inside its window."""
    fwd = defaultdict(list)
    for eff, causes in acknowledgement_edges(trace).items():
        for c in causes:
            fwd[c].append(eff)
    stack, seen = [start], {start}
    while stack:
        s = stack.pop()
        if s in sinks:
            return True
        for n in fwd[s]:
            if n in window and n not in seen:
                seen.add(n)
                stack.append(n)
    return False


def test_seitz_early_adversarial_orphans_on_carry(adversarial):
    system = build_rca(2, "seitz-early")
    tr, _ = run_transactions(system, _exhaustive(2), adversarial)
    rep = detect_orphans(tr, system)
    carry = [o for o in rep.orphans if o.wire.startswith("c1.")]
    assert carry and all(o.kind == "wire" for o in carry)
    by_seq = {e.seq: e for e in tr.events}
    assert any(by_seq[o.seq].value == 0 for o in carry)


@pytest.mark.parametrize("kind", list(FullAdderKind), ids=lambda k: k.value)
def test_default_delays_no_orphans(kind, default):
    system = build_rca(2, kind)
    tr, _ = run_transactions(system, _exhaustive(2, rounds=4), default)
    assert len(detect_orphans(tr, system)) == 0


def test_seitz_weak_single_stage_clean(default, adversarial):
    system = build_rca(1, "seitz-weak")
    for d in (default, adversarial):
        tr, _ = run_transactions(system, _exhaustive(1), d)
        assert not detect_orphans(tr, system)


def test_soundness(adversarial):
    """Every reported orphan has no acknowledgement path to an output edge."""
    system = build_rca(2, "lopt-eo")
    tr, _ = run_transactions(system, _exhaustive(2), adversarial)
    rep = detect_orphans(tr, system, relative_timing=False)
    assert rep
    outs = set(tr.netlist.output_wires)
    for o in rep.orphans:
        start, end = next((s, e) for s, e in half_phase_windows(tr) if s <= o.time < e)
        window = {e.seq for e in tr.events if start <= e.time < end}
        sinks = {s for s in window if tr.events[s].wire in outs}
        assert not _forward_reach(tr, o.seq, window, sinks)


def test_completeness_small(default):
    """Events not reported do reach a sink."""
    system = build_rca(2, "aopt-eo")
    tr, _ = run_transactions(system, _exhaustive(2)[:8], default)
    rep = detect_orphans(tr, system, relative_timing=False)
    reported = {o.seq for o in rep.orphans}
    outs = set(tr.netlist.output_wires)
    for s, e in half_phase_windows(tr):
        window = {ev.seq for ev in tr.events if s <= ev.time < e}
        sinks = {x for x in window if tr.events[x].wire in outs}
        for x in window:
            if tr.events[x].gate is not None and x not in reported:
                assert _forward_reach(tr, x, window, sinks)

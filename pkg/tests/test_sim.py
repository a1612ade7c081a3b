import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rtzsim.builders import FullAdderKind, build_full_adder, build_rca
from rtzsim.errors import IllegalCodeword, Oscillation, ProtocolStall, RangeError
from rtzsim.netlist import Gate, GateKind, Netlist, Port
from rtzsim.sim import (
    Phase, RtMode, RtPolicy, Simulator, check_relative_timing, operand_codewords,
    run_transactions, simulate,
)

KINDS = list(FullAdderKind)


def test_quiescent_all_spacer(default):
    tr = simulate(build_full_adder("aopt-eo"), [], default)
    assert tr.gate_events() == []


def test_generate_edge_time(default):
    tr = simulate(build_full_adder("aopt-eo"), [(0, "a.1", 1), (0, "b.1", 1), (0, "cin.0", 1)], default)
    first = tr.by_wire["cout.1"][0]
    assert (first.time, first.value) == (72, 1)


def test_illegal_codeword_on_output_pair(default):
    net = Netlist([Gate("p", GateKind.OR2, ("x.1", "x.0"), "z.1"),
                   Gate("q", GateKind.OR2, ("x.0", "x.1"), "z.0")],
                  [Port.dual("x")], [Port.dual("z")])
    with pytest.raises(IllegalCodeword):
        simulate(net, [(0, "x.1", 1)], default)


def test_step_limit(default):
    with pytest.raises(Oscillation):
        simulate(build_full_adder("aopt-eo"), [(0, "a.1", 1), (0, "b.1", 1), (0, "cin.0", 1)],
                 default, step_limit=4)


def test_drive_checks(default):
    sim = Simulator(build_full_adder("aopt-eo"), default)
    with pytest.raises(ValueError):
        sim.drive(0, "sum.1", 1)
    with pytest.raises(ValueError):
        sim.drive(0, "a.1", 2)


def test_operand_range():
    with pytest.raises(RangeError):
        operand_codewords(build_rca(2, "aopt-eo"), 4, 0, 0)


def _exhaustive(width):
    return [(a, b, c) for a in range(2**width) for b in range(2**width) for c in (0, 1)]


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
@pytest.mark.parametrize("width", [1, 2, 3])
def test_exhaustive_addition(kind, width, default):
    _, recs = run_transactions(build_rca(width, kind), _exhaustive(width), default)
    for r in recs:
        assert r.sum + (r.cout << width) == r.a + r.b + r.cin


def test_trace_invariants(default):
    """Causality, alternation and ack ordering on a 2-bit run."""
    for kind in KINDS:
        system = build_rca(2, kind)
        tr, recs = run_transactions(system, _exhaustive(2), default)
        last = {}
        for e in tr.events:
            assert last.get(e.wire, 0) != e.value
            last[e.wire] = e.value
            if e.gate is not None:
                assert e.time == tr.events[e.cause].time + tr.gate_delay[e.gate]
        cd_pairs = [(p.d1, p.d0) for p in system.rca.inputs]
        for e in tr.by_wire["ackout"]:
            vals = [tr.value_before(w, e.time, e.seq) for pair in cd_pairs for w in pair]
            valid = [vals[2 * i] or vals[2 * i + 1] for i in range(len(cd_pairs))]
            assert all(valid) if e.value else not any(valid)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_monotone_phases(kind, default):
    tr, _ = run_transactions(build_rca(1, kind), _exhaustive(1), default)
    for e in tr.events:
        if e.phase is None or e.wire == "ackout":
            continue
        assert e.value == (1 if e.phase.is_set else 0), e


def test_monotone_phases_wide(default):
    rng = np.random.default_rng(5)
    ops = [(int(rng.integers(2**32)), int(rng.integers(2**32)), int(rng.integers(2))) for _ in range(20)]
    for kind in KINDS:
        tr, _ = run_transactions(build_rca(32, kind), ops, default)
        assert all(e.value == int(e.phase.is_set) for e in tr.events if e.wire != "ackout")


def test_reverse_constant_aopt_width4(uniform):
    _, recs = run_transactions(build_rca(4, "aopt-eo"), _exhaustive(4), uniform)
    assert len({r.reverse for r in recs}) == 1


def test_deterministic_bytes(default):
    system = build_rca(3, "lopt-eo")
    a = run_transactions(system, _exhaustive(3)[:40], default)[0].to_jsonl()
    b = run_transactions(build_rca(3, "lopt-eo"), _exhaustive(3)[:40], default)[0].to_jsonl()
    assert a == b
    first = json.loads(a.splitlines()[0])
    assert set(first) == {"seq", "t", "wire", "v", "cause", "phase"}


def test_vcd_header(default):
    tr, _ = run_transactions(build_rca(1, "aopt-eo"), [(1, 0, 1)], default)
    vcd = tr.to_vcd()
    assert "$enddefinitions $end" in vcd and "#0" in vcd


def test_stall_when_ack_never_rises(default):
    from rtzsim.builders import build_completion_detector
    system = build_rca(1, "aopt-eo")
    cd = build_completion_detector(2, [Port.dual("a0"), Port.dual("ghost")])
    broken = type(system)(system.kind, system.width, system.rca, cd, system.stages)
    with pytest.raises(ProtocolStall):
        run_transactions(broken, [(0, 0, 0)], default)


def test_rt_check_examples(default, adversarial):
    system = build_rca(2, "lopt-eo")
    tr, _ = run_transactions(system, _exhaustive(2), default, RtPolicy(RtMode.CHECK))
    assert check_relative_timing(tr, system) == []
    tr, _ = run_transactions(system, _exhaustive(2), adversarial, RtPolicy(RtMode.CHECK))
    v = check_relative_timing(tr, system)
    assert v and all(x.stage == 1 and x.carry_wire.startswith("c1.") for x in v)
    one = build_rca(1, "lopt-eo")
    tr, _ = run_transactions(one, _exhaustive(1), adversarial)
    assert check_relative_timing(tr, one) == []


@pytest.mark.parametrize("kind", ["seitz-early", "aopt-eo", "lopt-eo"])
def test_enforce_removes_violations(kind, adversarial):
    system = build_rca(3, kind)
    tr, recs = run_transactions(system, _exhaustive(3), adversarial, RtPolicy(RtMode.ENFORCE))
    assert check_relative_timing(tr, system) == []
    assert all(r.sum + (r.cout << 3) == r.a + r.b + r.cin for r in recs)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(KINDS), st.integers(1, 6), st.data())
def test_random_widths_match_oracle(kind, width, data):
    from rtzsim.cells import default_delays
    ops = data.draw(st.lists(st.tuples(st.integers(0, 2**width - 1), st.integers(0, 2**width - 1),
                                       st.integers(0, 1)), min_size=1, max_size=6))
    _, recs = run_transactions(build_rca(width, kind), ops, default_delays())
    assert [(r.sum, r.cout) for r in recs] == [divmod(a + b + c, 2**width)[::-1] for a, b, c in ops]


def test_phases_recorded(default):
    tr, _ = run_transactions(build_rca(1, "aopt-eo"), [(0, 1, 0)], default)
    assert {e.phase for e in tr.events} <= set(Phase)

from collections import Counter

import pytest

from rtzsim.builders import FullAdderKind, build_completion_detector, build_full_adder, build_rca
from rtzsim.errors import ParseError
from rtzsim.fileio import emit_netlist, parse_netlist_file, parse_netlist_text
from rtzsim.netlist import GateKind

K = GateKind


def _same(a, b):
    return (sorted(a.gates, key=lambda g: g.id) == sorted(b.gates, key=lambda g: g.id)
            and a.inputs == b.inputs and a.outputs == b.outputs and a.forks == b.forks)


def test_aopt_file(tmp_path):
    p = tmp_path / "aopt.json"
    p.write_text(emit_netlist(build_full_adder("aopt-eo")))
    net = parse_netlist_file(p)
    assert net.inventory() == Counter({K.AO22: 6, K.CE2: 2, K.OR2: 1})


@pytest.mark.parametrize("kind", list(FullAdderKind), ids=lambda k: k.value)
def test_fixpoint(kind):
    net = build_full_adder(kind)
    once = parse_netlist_text(emit_netlist(net))
    assert _same(once, net)
    assert emit_netlist(parse_netlist_text(emit_netlist(once))) == emit_netlist(once)


def test_system_with_single_rail_ack():
    net = build_rca(2, "lopt-eo").netlist
    assert _same(parse_netlist_text(emit_netlist(net)), net)
    cd = build_completion_detector(3)
    assert parse_netlist_text(emit_netlist(cd)).outputs[0].wire == "ackout"


BAD = {
    "kind": ('{"gates":[{"id":"g","kind":"NAND9","in":["x"],"out":"y"}],"inputs":[],"outputs":[]}',
             "gates[0].kind"),
    "extra-top": ('{"gates":[],"inputs":[],"outputs":[],"extra":1}', "extra"),
    "extra-gate": ('{"gates":[{"id":"g","kind":"OR2","in":["a","b"],"out":"y","w":1}],'
                   '"inputs":[],"outputs":[]}', "gates[0]"),
    "port": ('{"gates":[],"inputs":[{"name":"x","d1":"x.1"}],"outputs":[]}', "inputs[0]"),
    "missing": ('{"gates":[],"inputs":[]}', "outputs"),
}


@pytest.mark.parametrize("name", sorted(BAD))
def test_parse_errors(name):
    text, field = BAD[name]
    with pytest.raises(ParseError) as e:
        parse_netlist_text(text)
    assert e.value.field == field


def test_syntax_error_has_line():
    with pytest.raises(ParseError) as e:
        parse_netlist_text('{\n  "gates": [,\n}')
    assert e.value.line == 2


def test_field_error_has_line():
    text = emit_netlist(build_full_adder("aopt-eo")).replace('"kind": "OR2"', '"kind": "NAND9"')
    with pytest.raises(ParseError) as e:
        parse_netlist_text(text)
    assert e.value.line is not None and "NAND9" in text.splitlines()[e.value.line - 1]


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        parse_netlist_file(tmp_path / "nope.json")

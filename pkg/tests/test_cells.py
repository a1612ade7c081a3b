from itertools import product

import pytest
from hypothesis import given, strategies as st

from rtzsim.cells import (
    DelayModel, GateState, c_element_via_ao222, calibrate_delays, eval_gate, load_delays,
    parse_constraints, parse_delay_config,
)
from rtzsim.errors import ArityMismatch, Inconsistent, ParseError, Underdetermined
from rtzsim.netlist import GateKind

K = GateKind
COMBINATIONAL = [k for k in GateKind if not k.stateful]


def test_examples():
    assert eval_gate(K.AO22, (1, 1, 0, 0))[0] == 1
    assert eval_gate(K.CE2, (1, 0), GateState(1))[0] == 1
    assert eval_gate(K.CE2, (0, 0), GateState(1))[0] == 0
    assert eval_gate(K.AO21, (0, 1, 1))[0] == 1
    assert eval_gate(K.OR6, (0,) * 6)[0] == 0


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        eval_gate(K.AO22, (1, 1, 0))


@pytest.mark.parametrize("kind", COMBINATIONAL, ids=lambda k: k.name)
def test_monotone(kind):
    for x in product((0, 1), repeat=kind.arity):
        y = eval_gate(kind, x)[0]
        for i, v in enumerate(x):
            if not v:
                up = x[:i] + (1,) + x[i + 1:]
                assert eval_gate(kind, up)[0] >= y


def test_c_element_matches_ao222_feedback():
    for x, y, z in product((0, 1), repeat=3):
        assert eval_gate(K.CE2, (x, y), GateState(z))[0] == c_element_via_ao222(x, y, z)


@given(st.sampled_from(list(GateKind)), st.data())
def test_eval_is_pure(kind, data):
    x = tuple(data.draw(st.lists(st.integers(0, 1), min_size=kind.arity, max_size=kind.arity)))
    s = GateState(data.draw(st.integers(0, 1)))
    assert eval_gate(kind, x, s) == eval_gate(kind, x, s)


def test_calibration_examples():
    d = calibrate_delays([({K.AO22: 2, K.CE2: 1}, 250), ({K.AO22: 3, K.CE2: 1}, 322)])
    assert (d[K.AO22], d[K.CE2]) == (72, 106)
    d = calibrate_delays([({K.AO22: 2, K.CE2: 1}, 250), ({K.AO22: 3, K.CE2: 1}, 322),
                          ({K.AO21: 1}, 25), ({K.AO21: 1, K.OR2: -1}, 3)])
    assert (d[K.AO21], d[K.OR2]) == (25, 22)


def test_calibration_underdetermined():
    with pytest.raises(Underdetermined) as e:
        calibrate_delays([({K.AND3: 1, K.OR3: 1}, 133)])
    assert {"AND3", "OR3"} <= set(e.value.kinds)


def test_calibration_inconsistent():
    with pytest.raises(Inconsistent):
        calibrate_delays([({K.OR2: 1}, 10), ({K.OR2: 1}, 11)])


def test_default_model_resums(default):
    assert default.path_sum([K.AO22, K.AO22, K.CE2]) == 250
    assert default.path_sum([K.AO22] * 3 + [K.CE2]) == 322
    assert default[K.AO21] == 25 and default[K.OR2] == 22
    assert default[K.AND3] + default[K.OR3] == 63
    assert set(default.delays) == set(GateKind)


def test_bundled_configs():
    s = load_delays("seitz-slack")
    assert s[K.AND3] + s[K.OR3] == 133
    a = load_delays("adversarial.cfg")
    assert a[K.AO21] == 500
    assert load_delays("uniform")[K.CE2] == 100


def test_delay_model_validation():
    with pytest.raises(ValueError):
        DelayModel({K.OR2: 0})
    with pytest.raises(ValueError):
        DelayModel({K.OR2: 1.5})
    with pytest.raises(KeyError):
        DelayModel({K.OR2: 1})[K.AND2]


def test_round_trip_config(default):
    assert DelayModel(parse_delay_config(default.to_config())) == DelayModel(default.delays)


def test_parse_errors():
    with pytest.raises(ParseError) as e:
        parse_delay_config("OR2=5\nNAND9=3\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_delay_config("OR2=abc")
    with pytest.raises(ParseError):
        parse_constraints("2*AO22 + = 5")
    assert parse_constraints("2*AO22 - OR2 = 7  # note") == [({K.AO22: 2, K.OR2: -1}, 7)]


def test_data_dir_override(tmp_path, monkeypatch):
    (tmp_path / "adversarial.cfg").write_text("OR2=9\n")
    monkeypatch.setenv("RTZSIM_DATA_DIR", str(tmp_path))
    assert load_delays("adversarial").delays == {K.OR2: 9}

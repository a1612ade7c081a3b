import pytest
from hypothesis import given, strategies as st

from rtzsim.builders import FullAdderKind, build_full_adder, build_rca
from rtzsim.errors import IllegalCodeword
from rtzsim.netlist import (
    SPACER, Gate, GateKind, Netlist, Port, dual_rail_decode, dual_rail_encode, rails,
    validate_netlist,
)

K = GateKind


@pytest.mark.parametrize("x, pair", [(1, (1, 0)), (0, (0, 1)), (SPACER, (0, 0))])
def test_encode(x, pair):
    assert dual_rail_encode(x) == pair


def test_decode_values():
    assert dual_rail_decode((1, 0)) == 1
    assert dual_rail_decode((0, 1)) == 0
    assert dual_rail_decode((0, 0)) == SPACER
    with pytest.raises(IllegalCodeword):
        dual_rail_decode((1, 1))


@given(st.sampled_from([0, 1, SPACER]))
def test_round_trip(x):
    assert dual_rail_decode(dual_rail_encode(x)) == x


def test_encode_rejects_junk():
    with pytest.raises(ValueError):
        dual_rail_encode(2)


def _tiny(gates, inputs=("x",), outputs=("z",)):
    return Netlist(gates, [Port.dual(n) for n in inputs], [Port.dual(n) for n in outputs])


def test_builders_validate_clean():
    for k in FullAdderKind:
        assert validate_netlist(build_full_adder(k)).ok
        assert validate_netlist(build_rca(3, k).netlist).ok


def test_arity_violation():
    net = _tiny([Gate("g", K.AO22, ("x.1", "x.0", "x.1"), "z.1"),
                 Gate("h", K.OR2, ("x.1", "x.0"), "z.0")])
    assert "arity" in validate_netlist(net).kinds()


def test_multiple_drivers():
    net = _tiny([Gate("g", K.OR2, ("x.1", "x.0"), "z.1"),
                 Gate("h", K.AND2, ("x.1", "x.0"), "z.1"),
                 Gate("k", K.AND2, ("x.1", "x.0"), "z.0")])
    assert "multiple-drivers" in validate_netlist(net).kinds()


def test_dangling_and_cycle():
    net = _tiny([Gate("g", K.OR2, ("x.1", "w"), "z.1"),
                 Gate("h", K.OR2, ("z.1", "x.0"), "w"),
                 Gate("k", K.AND2, ("x.1", "nowhere"), "z.0")])
    kinds = validate_netlist(net).kinds()
    assert {"cycle", "dangling"} <= kinds


def test_c_element_loop_is_not_a_cycle():
    # state is allowed to live in a C-element loop
    net = _tiny([Gate("c", K.CE2, ("x.1", "z.0"), "z.1"), Gate("o", K.OR2, ("z.1", "x.0"), "z.0")])
    assert "cycle" not in validate_netlist(net).kinds()


def test_unpaired_and_duplicate_port():
    net = Netlist([Gate("g", K.OR2, ("x.1", "x.0"), "z.1")],
                  [Port("x", "x.1", "x.0"), Port("x", "x.1", "y")],
                  [Port("z", "z.1", "z.1")])
    kinds = validate_netlist(net).kinds()
    assert {"unpaired", "duplicate-port"} <= kinds


def test_unknown_fork():
    net = build_full_adder("aopt-eo")
    bad = Netlist(net.gates, net.inputs, net.outputs, net.forks | {"nope"})
    assert validate_netlist(bad).kinds() == {"unknown-fork"}


def test_validate_is_idempotent():
    net = _tiny([Gate("g", K.AO22, ("x.1",), "z.1")])
    assert validate_netlist(net) == validate_netlist(net)


def test_single_rail_ports_allowed():
    net = Netlist([Gate("g", K.OR2, ("x.1", "x.0"), "ack")], [Port.dual("x")], [Port.single("ack")])
    assert validate_netlist(net).ok


def test_renamed_and_inventory():
    net = build_full_adder("lopt-eo")
    r = net.renamed({"a.1": "p.1"}, prefix="u.")
    assert all(g.id.startswith("u.") for g in r.gates)
    assert "p.1" in r.wires and "a.1" not in r.wires
    assert r.inventory() == net.inventory()
    assert rails("q") == ("q.1", "q.0")

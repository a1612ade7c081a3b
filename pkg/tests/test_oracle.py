import pytest
from hypothesis import given, strategies as st

from rtzsim.analysis import FULL_ADDER_EQUATIONS, check_disjoint_products, oracle_add, rail_cube
from rtzsim.errors import RangeError


def test_examples():
    assert oracle_add(1, 1, 1, 1) == (1, 1)
    assert oracle_add(0, 0, 0, 7) == (0, 0)
    assert oracle_add(2**32 - 1, 0, 1, 32) == (0, 1)


@given(st.integers(1, 64), st.data())
def test_matches_integer_addition(width, data):
    a = data.draw(st.integers(0, 2**width - 1))
    b = data.draw(st.integers(0, 2**width - 1))
    c = data.draw(st.integers(0, 1))
    s, co = oracle_add(a, b, c, width)
    assert s + (co << width) == a + b + c


@pytest.mark.parametrize("args", [(4, 0, 0, 2), (0, 0, 2, 3), (-1, 0, 0, 4), (0, 0, 0, 0)])
def test_range_errors(args):
    with pytest.raises(RangeError):
        oracle_add(*args)


def test_equations_disjoint():
    for cubes in FULL_ADDER_EQUATIONS.values():
        assert check_disjoint_products(cubes)


def test_disjoint_examples():
    assert not check_disjoint_products([{"a": 1, "b": 1}, {"a": 1, "c": 1}])
    assert check_disjoint_products([{"a": 1}])
    assert check_disjoint_products([])


def test_equations_cover_truth_table():
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                point = {"a": a, "b": b, "cin": c}
                s, co = oracle_add(a, b, c, 1)
                for out, val in (("sum", s), ("cout", co)):
                    hits = [cu for cu in FULL_ADDER_EQUATIONS[f"{out}.{val}"]
                            if all(point[v] == p for v, p in cu.items())]
                    assert len(hits) == 1


def test_rail_cube():
    assert rail_cube(["a.1", "b.0"]) == {"a": 1, "b": 0}
    assert rail_cube(["a.1", "a.0"]) == {}

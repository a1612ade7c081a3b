"""Reference arithmetic and product-term algebra."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from ..builders import COUT0_TERMS, COUT1_TERMS, FA_INPUTS, SUM0_TERMS, SUM1_TERMS
from ..errors import RangeError


def oracle_add(a: int, b: int, cin: int, width: int) -> tuple[int, int]:
    if width < 1:
        raise RangeError("width must be >= 1")
    if not (0 <= a < 2**width and 0 <= b < 2**width):
        raise RangeError(f"operands must be below 2**{width}")
    if cin not in (0, 1):
        raise RangeError("carry-in must be 0 or 1")
    total = a + b + cin
    return total % 2**width, total >> width


# A cube maps a variable to the polarity it requires.  A dual-rail literal
# such as ``a.1`` is the variable ``a`` at polarity 1.
Cube = Mapping[str, int]


def check_disjoint_products(products: Iterable[Cube]) -> bool:
    """True iff the conjunction of every pair of cubes is empty."""
    cubes = [dict(p) for p in products]
    for p, q in combinations(cubes, 2):
        if all(p[v] == q[v] for v in p.keys() & q.keys()):
            return False
    return True


def terms_as_cubes(terms) -> list[dict[str, int]]:
    return [{n: b for n, b in zip(FA_INPUTS, t) if b is not None} for t in terms]


FULL_ADDER_EQUATIONS = {
    "sum.1": terms_as_cubes(SUM1_TERMS),
    "sum.0": terms_as_cubes(SUM0_TERMS),
    "cout.1": terms_as_cubes(COUT1_TERMS),
    "cout.0": terms_as_cubes(COUT0_TERMS),
}


def rail_cube(wires: Iterable[str]) -> dict[str, int]:
    """Cube of a product gate whose inputs are dual-rail literals (``x.1``/``x.0``)."""
    out = {}
    for w in wires:
        var, _, pol = w.rpartition(".")
        p = int(pol)
        if out.get(var, p) != p:
            return {}
        out[var] = p
    return out

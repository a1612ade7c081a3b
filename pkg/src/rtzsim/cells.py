"""Behavioral gate models and the per-kind delay model.

Delays are integer picoseconds, one value per gate kind (rise == fall).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import sympy

from .errors import ArityMismatch, Inconsistent, ParseError, Underdetermined
from .netlist import GateKind

K = GateKind


@dataclass(frozen=True)
class GateState:
    held_output: int = 0


def evaluate(kind: GateKind, x: Sequence[int], held: int = 0) -> int:
    """Output of ``kind`` for inputs ``x``; ``held`` is the C-element's current output."""
    if kind is K.CE2:
        a, b = x
        if a == b:
            return a
        return held
    if kind is K.AO22:
        return (x[0] & x[1]) | (x[2] & x[3])
    if kind is K.AO21:
        return (x[0] & x[1]) | x[2]
    if kind is K.AO222:
        return (x[0] & x[1]) | (x[2] & x[3]) | (x[4] & x[5])
    if kind in (K.AND2, K.AND3):
        return int(all(x))
    return int(any(x))


def eval_gate(kind: GateKind, inputs: Sequence[int], state: GateState = GateState()):
    if len(inputs) != kind.arity:
        raise ArityMismatch(f"{kind.name} takes {kind.arity} inputs, got {len(inputs)}")
    if any(v not in (0, 1) for v in inputs):
        raise ValueError(f"inputs must be binary: {inputs!r}")
    out = evaluate(kind, inputs, state.held_output)
    if kind.stateful:
        return out, GateState(out)
    return out, state


def c_element_via_ao222(x: int, y: int, z: int) -> int:
    """C-element as an AO222 with its output fed back: XY + XZ + YZ."""
    return evaluate(K.AO222, (x, y, x, z, y, z))


@dataclass(frozen=True)
class DelayModel:
    delays: Mapping[GateKind, int]
    name: str = ""

    def __post_init__(self):
        d = {GateKind(k) if not isinstance(k, GateKind) else k: v
             for k, v in dict(self.delays).items()}
        for k, v in d.items():
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise ValueError(f"delay for {k.name} must be a positive integer ps, got {v!r}")
        object.__setattr__(self, "delays", dict(sorted(d.items(), key=lambda kv: kv[0].name)))

    def __getitem__(self, kind: GateKind) -> int:
        try:
            return self.delays[kind]
        except KeyError:
            raise KeyError(f"delay model {self.name or '<anon>'} has no delay for {kind.name}") from None

    def __contains__(self, kind) -> bool:
        return kind in self.delays

    def path_sum(self, kinds: Iterable[GateKind]) -> int:
        return sum(self[k] for k in kinds)

    def with_overrides(self, name: str | None = None, **overrides: int) -> "DelayModel":
        d = dict(self.delays)
        d.update({K[k]: v for k, v in overrides.items()})
        return DelayModel(d, name if name is not None else self.name)

    @classmethod
    def uniform(cls, ps: int = 100) -> "DelayModel":
        return cls({k: ps for k in GateKind}, "uniform")

    def to_config(self) -> str:
        return "".join(f"{k.name}={v}\n" for k, v in self.delays.items())


# --- calibration -----------------------------------------------------------

Constraint = tuple[Mapping[GateKind, int], int]


def calibrate_delays(constraints: Sequence[Constraint],
                     defaults: Mapping[GateKind, int] | None = None,
                     name: str = "calibrated") -> DelayModel:
    """Solve linear path-sum constraints for per-kind delays.

    Every kind that appears in a constraint must be pinned uniquely by the
    system; kinds never mentioned come from ``defaults``.
    """
    mentioned = sorted({k for coeffs, _ in constraints for k, c in coeffs.items() if c},
                       key=lambda k: k.name)
    solved: dict[GateKind, int] = {}
    if mentioned:
        rows = [[sympy.Integer(coeffs.get(k, 0)) for k in mentioned] + [sympy.Integer(total)]
                for coeffs, total in constraints]
        rref, pivots = sympy.Matrix(rows).rref()
        ncol = len(mentioned)
        if ncol in pivots:
            raise Inconsistent("delay constraints are contradictory")
        free = [k for i, k in enumerate(mentioned) if i not in pivots]
        loose = []
        for r, pc in enumerate(pivots):
            row = rref.row(r)
            if any(row[j] != 0 for j in range(ncol) if j != pc):
                loose.append(mentioned[pc])
        if free or loose:
            raise Underdetermined(sorted({k.name for k in free + loose}))
        for r, pc in enumerate(pivots):
            v = rref[r, ncol]
            if not v.is_integer or v <= 0:
                raise Inconsistent(f"{mentioned[pc].name} solves to {v}, not a positive integer ps")
            solved[mentioned[pc]] = int(v)
    out = {k: v for k, v in (defaults or {}).items() if k not in solved}
    out.update(solved)
    return DelayModel(out, name)


# --- file formats ----------------------------------------------------------

def data_dir() -> Path:
    env = os.environ.get("RTZSIM_DATA_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("rtzsim") / "data"))


def _kind(token: str, source, line) -> GateKind:
    try:
        return K[token.strip().upper()]
    except KeyError:
        raise ParseError(f"unknown gate kind {token.strip()!r}", source=source, line=line) from None


def parse_delay_config(text: str, source=None) -> dict[GateKind, int]:
    """Flat ``KIND=ps`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected KIND=ps", source=source, line=n)
        k, v = line.split("=", 1)
        kind = _kind(k, source, n)
        try:
            ps = int(v.strip())
        except ValueError:
            raise ParseError(f"delay {v.strip()!r} is not an integer", source=source, line=n) from None
        if kind in out:
            raise ParseError(f"duplicate entry for {kind.name}", source=source, line=n)
        out[kind] = ps
    return out


_TERM = re.compile(r"([+-]?)\s*(?:(\d+)\s*\*\s*)?([A-Za-z][A-Za-z0-9]*)")


def parse_constraints(text: str, source=None) -> list[Constraint]:
    """Lines of ``k1*KIND + k2*KIND = ps``."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise ParseError("expected 'lhs = ps'", source=source, line=n)
        lhs, rhs = (s.strip() for s in line.split("="))
        try:
            total = int(rhs)
        except ValueError:
            raise ParseError(f"right-hand side {rhs!r} is not an integer", source=source, line=n) from None
        coeffs: dict[GateKind, int] = {}
        pos = 0
        lhs_compact = lhs.replace(" ", "")
        if not lhs_compact:
            raise ParseError("empty left-hand side", source=source, line=n)
        for m in _TERM.finditer(lhs_compact):
            if m.start() != pos or (pos and not m.group(1)):
                raise ParseError(f"cannot parse {lhs!r}", source=source, line=n)
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            kind = _kind(m.group(3), source, n)
            coeffs[kind] = coeffs.get(kind, 0) + sign * coef
        if pos != len(lhs_compact):
            raise ParseError(f"cannot parse {lhs!r}", source=source, line=n)
        out.append((coeffs, total))
    return out


def load_delays(name_or_path: str | os.PathLike) -> DelayModel:
    """A bundled model by name (``default``, ``seitz-slack``, ``uniform``, ``adversarial``) or a config path."""
    key = str(name_or_path)
    if key == "default":
        return default_delays()
    if key == "uniform":
        return DelayModel.uniform()
    bundled = {"seitz-slack": "seitz_slack.cfg", "adversarial": "adversarial.cfg"}
    path = data_dir() / bundled[key] if key in bundled else Path(key)
    if not path.exists() and (data_dir() / path.name).exists():
        path = data_dir() / path.name
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read delay config: {e.strerror}", source=str(path)) from None
    return DelayModel(parse_delay_config(text, source=path), path.stem.replace("_", "-"))


def default_delays() -> DelayModel:
    """Unpinned kinds from ``unpinned.cfg``, the rest solved from ``calibration.txt``."""
    d = data_dir()
    cons = parse_constraints((d / "calibration.txt").read_text(), source="calibration.txt")
    base = parse_delay_config((d / "unpinned.cfg").read_text(), source="unpinned.cfg")
    return calibrate_delays(cons, base, name="default")

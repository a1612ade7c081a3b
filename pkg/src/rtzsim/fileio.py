"""Netlist JSON interchange.

Top level: ``gates`` (``id``, ``kind``, ``in``, ``out``), ``inputs`` and
``outputs`` (``name`` plus ``d1``/``d0``, or ``wire`` for a single-rail
port), ``forks``, and an optional ``name``.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import ParseError
from .netlist import Gate, GateKind, Netlist, Port

_TOP = {"gates", "inputs", "outputs", "forks", "name"}
_TOP_REQUIRED = {"gates", "inputs", "outputs"}
_GATE = {"id", "kind", "in", "out"}


def _port_to_json(p: Port) -> dict:
    if p.is_dual:
        return {"name": p.name, "d1": p.d1, "d0": p.d0}
    return {"name": p.name, "wire": p.wire}


def netlist_to_json(net: Netlist) -> dict:
    return {
        "name": net.name,
        "inputs": [_port_to_json(p) for p in net.inputs],
        "outputs": [_port_to_json(p) for p in net.outputs],
        "forks": sorted(net.forks),
        "gates": [{"id": g.id, "kind": g.kind.value, "in": list(g.inputs), "out": g.output}
                  for g in net.gates],
    }


def emit_netlist(net: Netlist) -> str:
    """Stable text form: one gate or port object per line."""
    d = netlist_to_json(net)
    lines = ["{", f'  "name": {json.dumps(d["name"])},']
    for key in ("inputs", "outputs", "gates"):
        items = d[key]
        lines.append(f'  "{key}": [')
        lines += [f"    {json.dumps(x, sort_keys=True)}" + ("," if i < len(items) - 1 else "")
                  for i, x in enumerate(items)]
        lines.append("  ],")
    lines.append(f'  "forks": {json.dumps(d["forks"])}')
    lines.append("}")
    return "\n".join(lines) + "\n"


class _Locator:
    def __init__(self, text: str, source):
        self.lines = text.splitlines()
        self.source = source

    def line_of(self, needle: str | None):
        if needle is None:
            return None
        pat = re.compile(re.escape(json.dumps(needle)))
        for i, ln in enumerate(self.lines, 1):
            if pat.search(ln):
                return i
        return None

    def error(self, msg, field, needle=None):
        return ParseError(msg, source=self.source, line=self.line_of(needle), field=field)


def _str_list(x, loc, field, needle):
    if not isinstance(x, list) or not all(isinstance(w, str) for w in x):
        raise loc.error("expected a list of wire names", field, needle)
    return tuple(x)


def _port(obj, loc, field):
    if not isinstance(obj, dict):
        raise loc.error("port must be an object", field)
    name = obj.get("name")
    if not isinstance(name, str):
        raise loc.error("port needs a string 'name'", field)
    keys = set(obj)
    if keys == {"name", "d1", "d0"}:
        if not (isinstance(obj["d1"], str) and isinstance(obj["d0"], str)):
            raise loc.error("rail names must be strings", field, name)
        return Port(name, obj["d1"], obj["d0"])
    if keys == {"name", "wire"} and isinstance(obj["wire"], str):
        return Port(name, wire=obj["wire"])
    raise loc.error(f"port keys must be name/d1/d0 or name/wire, got {sorted(keys)}", field, name)


def parse_netlist_text(text: str, source=None) -> Netlist:
    loc = _Locator(text, source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, source=source, line=e.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", source=source, line=1)
    extra = set(doc) - _TOP
    if extra:
        k = sorted(extra)[0]
        raise loc.error(f"unknown key {k!r}", k, k)
    missing = _TOP_REQUIRED - set(doc)
    if missing:
        raise ParseError(f"missing key(s) {sorted(missing)}", source=source, field=sorted(missing)[0])
    for key in ("gates", "inputs", "outputs"):
        if not isinstance(doc[key], list):
            raise loc.error("expected a list", key, key)
    gates = []
    for i, g in enumerate(doc["gates"]):
        field = f"gates[{i}]"
        if not isinstance(g, dict):
            raise loc.error("gate must be an object", field)
        gid = g.get("id")
        needle = gid if isinstance(gid, str) else None
        if set(g) != _GATE:
            bad = sorted(set(g) ^ _GATE)
            raise loc.error(f"gate keys must be id/kind/in/out (offending: {bad})", field, needle)
        if not isinstance(gid, str):
            raise loc.error("gate id must be a string", f"{field}.id")
        try:
            kind = GateKind(g["kind"])
        except (ValueError, TypeError):
            raise loc.error(f"unknown gate kind {g['kind']!r}", f"{field}.kind", gid) from None
        ins = _str_list(g["in"], loc, f"{field}.in", gid)
        if not isinstance(g["out"], str):
            raise loc.error("gate output must be a wire name", f"{field}.out", gid)
        gates.append(Gate(gid, kind, ins, g["out"]))
    inputs = [_port(p, loc, f"inputs[{i}]") for i, p in enumerate(doc["inputs"])]
    outputs = [_port(p, loc, f"outputs[{i}]") for i, p in enumerate(doc["outputs"])]
    forks = _str_list(doc.get("forks", []), loc, "forks", "forks")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise loc.error("name must be a string", "name", "name")
    return Netlist(gates, inputs, outputs, frozenset(forks), name)


def parse_netlist_file(path: str | Path) -> Netlist:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(str(e), source=str(path)) from None
    return parse_netlist_text(text, source=str(path))


def write_netlist(net: Netlist, path: str | Path) -> None:
    Path(path).write_text(emit_netlist(net))

"""Longest-path arithmetic over a netlist's gate graph (zero wire delay)."""

from __future__ import annotations

import graphlib
from typing import Callable, Iterable

from .netlist import Gate, Netlist


def _order(netlist: Netlist) -> list[Gate]:
    ts = graphlib.TopologicalSorter()
    for g in netlist.gates:
        preds = {netlist.driver[w].id for w in g.inputs if w in netlist.driver}
        preds.discard(g.id)  # AO222 feedback
        ts.add(g.id, *preds)
    return [netlist.gate_by_id[i] for i in ts.static_order()]


def arrivals(netlist: Netlist, gate_delay: Callable[[Gate], int], sources: Iterable[str],
             avoid: Iterable[str] = ()) -> dict[str, tuple[int, tuple[str, ...]]]:
    """Latest arrival time at every wire reachable from ``sources``.

    Returns ``wire -> (time, gate ids along the longest path)``.  Wires in
    ``avoid`` are treated as cut.
    """
    avoid = set(avoid)
    best: dict[str, tuple[int, tuple[str, ...]]] = {w: (0, ()) for w in sources if w not in avoid}
    for g in _order(netlist):
        if g.output in avoid:
            continue
        cands = [best[w] for w in g.inputs if w in best and w != g.output]
        if not cands:
            continue
        t, path = max(cands, key=lambda tp: (tp[0], tp[1]))
        val = (t + gate_delay(g), path + (g.id,))
        if g.output not in best or val[0] > best[g.output][0]:
            best[g.output] = val
    return best


def longest_path(netlist: Netlist, gate_delay: Callable[[Gate], int], sources: Iterable[str],
                 sinks: Iterable[str], through: Iterable[str] | None = None,
                 avoid: Iterable[str] = ()) -> tuple[int, tuple[str, ...]] | None:
    """Longest source->sink path, optionally forced through one of ``through``."""
    sinks = list(sinks)
    if through is None:
        arr = arrivals(netlist, gate_delay, sources, avoid)
        hits = [arr[s] for s in sinks if s in arr]
        return max(hits, key=lambda tp: tp[0]) if hits else None
    best = None
    for mid in through:
        head = arrivals(netlist, gate_delay, sources, avoid).get(mid)
        if head is None:
            continue
        tail = arrivals(netlist, gate_delay, [mid], avoid)
        for s in sinks:
            if s in tail:
                cand = (head[0] + tail[s][0], head[1] + tail[s][1])
                if best is None or cand[0] > best[0]:
                    best = cand
    return best

"""Orphans and relative-timing violations on a 2-bit RCA under two delay models."""

import argparse
from dataclasses import dataclass

from rtzsim.analysis import detect_orphans
from rtzsim.builders import build_rca
from rtzsim.cells import load_delays
from rtzsim.sim import RtMode, RtPolicy, check_relative_timing, run_transactions


@dataclass
class Config:
    adder: str = "seitz-early"
    width: int = 2
    rounds: int = 4


def run(cfg: Config):
    n = cfg.width
    ops = [(a, b, c) for a in range(2**n) for b in range(2**n) for c in (0, 1)] * cfg.rounds
    system = build_rca(n, cfg.adder)
    for model in ("default", "adversarial"):
        for mode in (RtMode.OFF, RtMode.ENFORCE):
            tr, _ = run_transactions(system, ops, load_delays(model), RtPolicy(mode))
            orphans = detect_orphans(tr, system)
            wires = sorted({o.wire for o in orphans.orphans})
            print(f"{model:11s} rt={mode.value:7s} txns={len(ops)} orphans={len(orphans):4d} "
                  f"rt_violations={len(check_relative_timing(tr, system)):4d} wires={wires}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--adder", default=Config.adder)
    ap.add_argument("--width", type=int, default=Config.width)
    ap.add_argument("--rounds", type=int, default=Config.rounds)
    a = ap.parse_args(argv)
    run(Config(a.adder, a.width, a.rounds))


if __name__ == "__main__":
    main()

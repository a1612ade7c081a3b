"""Forward/reverse latency of forced carry chains, per adder and width.

Prints a CSV with one row per (adder, n, m) under the uniform delay model.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from rtzsim.analysis import forced_chain_operands
from rtzsim.builders import FullAdderKind, build_rca
from rtzsim.cells import DelayModel, load_delays
from rtzsim.sim import run_transactions


@dataclass
class Config:
    max_width: int = 8
    delays: str = "uniform"


def sweep(cfg: Config):
    dm = DelayModel.uniform() if cfg.delays == "uniform" else load_delays(cfg.delays)
    for kind in FullAdderKind:
        for n in range(1, cfg.max_width + 1):
            ms = range(1, n + 1)
            _, recs = run_transactions(build_rca(n, kind), [forced_chain_operands(n, m) for m in ms], dm)
            for m, r in zip(ms, recs):
                yield kind.value, n, m, r.forward, r.reverse, r.cycle


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-width", type=int, default=Config.max_width)
    ap.add_argument("--delays", default=Config.delays, help="'uniform' or a delay config name/path")
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["adder", "n", "m", "forward_ps", "reverse_ps", "cycle_ps"])
    w.writerows(sweep(Config(args.max_width, args.delays)))


if __name__ == "__main__":
    main()

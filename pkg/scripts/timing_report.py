"""Slacks, critical paths and the reproduced Table 4 in one report."""

import argparse
from dataclasses import dataclass

from rtzsim.analysis import (
    compute_timing_slack, critical_path_elements, measure_slack_by_simulation, reproduce_table4,
)
from rtzsim.analysis.timing import ns
from rtzsim.cells import load_delays


@dataclass
class Config:
    delays: str = "default"
    seitz_delays: str = "seitz-slack"


def run(cfg: Config):
    d = load_delays(cfg.delays)
    for kind, model in (("aopt-eo", d), ("lopt-eo", d), ("seitz-early", d),
                        ("seitz-early", load_delays(cfg.seitz_delays))):
        rep = compute_timing_slack(kind, model)
        sim = measure_slack_by_simulation(kind, model)["slack_ps"]
        path = "+".join(k.name for k in critical_path_elements(kind, model))
        print(f"{kind:12s} [{model.name}] direct={rep.direct_ps} indirect={rep.indirect_ps} "
              f"slack={rep.slack_ps} ps (simulated {sim}) generate_slack={rep.generate_slack_ps} "
              f"critical={path}")
    tab = reproduce_table4()
    print()
    print(tab.to_csv(), end="")
    print(f"max |delta| = {ns(tab.max_abs_delta(), 3)} ns over {tab.cells()} cells")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delays", default=Config.delays)
    ap.add_argument("--seitz-delays", default=Config.seitz_delays)
    a = ap.parse_args(argv)
    run(Config(a.delays, a.seitz_delays))


if __name__ == "__main__":
    main()

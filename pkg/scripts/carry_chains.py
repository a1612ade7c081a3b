"""Longest active carry-chain statistics for random operands."""

import argparse
import json
from dataclasses import asdict, dataclass

from rtzsim.analysis import carry_chain_stats, exhaustive_chain_distribution, trace_chain_distribution


@dataclass
class Config:
    width: int = 32
    samples: int = 100_000
    seed: int = 1
    check_width: int = 4


def run(cfg: Config) -> dict:
    s = carry_chain_stats(cfg.width, cfg.samples, cfg.seed)
    exh = exhaustive_chain_distribution(cfg.check_width)
    return {
        "config": asdict(cfg),
        "mean": round(s.mean, 4),
        "propagate_mean": round(s.propagate_mean, 4),
        "fraction_le_4": round(s.fraction_le(4), 4),
        "fraction_le_8": round(s.fraction_le(8), 4),
        "exhaustive_equals_trace": exh == trace_chain_distribution(cfg.check_width),
        "exhaustive": exh,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    for f, v in asdict(Config()).items():
        ap.add_argument("--" + f.replace("_", "-"), type=int, default=v)
    a = ap.parse_args(argv)
    print(json.dumps(run(Config(**vars(a))), indent=2))


if __name__ == "__main__":
    main()
